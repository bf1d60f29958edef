import numpy as np
import pytest

from seqdesign.data import Dataset, DatasetSchema


@pytest.fixture
def small_schema():
    return DatasetSchema(("perf",), ("p1", "p2"))


@pytest.fixture
def small_dataset(small_schema):
    rows = np.array(
        [
            [1.0, 0.2, 0.7],
            [2.0, 0.9, 0.1],
        ]
    )
    return Dataset(small_schema, rows)


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
