"""Tabular design datasets: loading, validation, splitting, and scaling."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, SchemaError, ValidationError


@dataclass(frozen=True)
class DatasetSchema:
    """Column layout of a design table: performance indicators first, then
    design parameters. ``boolean_columns`` flags 0/1-valued parameters."""

    performance_columns: tuple[str, ...]
    parameter_columns: tuple[str, ...]
    boolean_columns: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "performance_columns", tuple(self.performance_columns))
        object.__setattr__(self, "parameter_columns", tuple(self.parameter_columns))
        object.__setattr__(self, "boolean_columns", tuple(self.boolean_columns))
        perf, par = set(self.performance_columns), set(self.parameter_columns)
        if not perf or not par:
            raise SchemaError("performance and parameter column lists must be non-empty")
        if len(perf) != len(self.performance_columns) or len(par) != len(self.parameter_columns):
            raise SchemaError("duplicate column names in schema")
        if perf & par:
            raise SchemaError(f"columns in both roles: {sorted(perf & par)}")
        if not set(self.boolean_columns) <= par:
            raise SchemaError("boolean_columns must be a subset of parameter_columns")

    @property
    def columns(self) -> tuple[str, ...]:
        return self.performance_columns + self.parameter_columns

    @property
    def num_performances(self) -> int:
        return len(self.performance_columns)

    @property
    def num_parameters(self) -> int:
        return len(self.parameter_columns)

    def boolean_parameter_indices(self) -> list[int]:
        """Indices into parameter_columns of the boolean-flagged parameters."""
        return [i for i, c in enumerate(self.parameter_columns) if c in self.boolean_columns]


@dataclass(frozen=True)
class Dataset:
    """An immutable table of finite real values in schema column order."""

    schema: DatasetSchema
    rows: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.schema.columns):
            raise ValidationError(
                f"rows must be 2-D with {len(self.schema.columns)} columns, got shape {rows.shape}"
            )
        if rows.size and not np.all(np.isfinite(rows)):
            raise ValidationError("dataset contains non-finite values")
        for name in self.schema.boolean_columns:
            col = rows[:, self.schema.columns.index(name)]
            if col.size and not np.all((col == 0.0) | (col == 1.0)):
                raise ValidationError(f"boolean column {name!r} contains values outside {{0, 1}}")
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def row_count(self) -> int:
        return self.rows.shape[0]

    @property
    def performances(self) -> np.ndarray:
        return self.rows[:, : self.schema.num_performances]

    @property
    def parameters(self) -> np.ndarray:
        return self.rows[:, self.schema.num_performances :]

    def take(self, indices) -> "Dataset":
        return Dataset(self.schema, self.rows[np.asarray(indices, dtype=int)])


def load_tabular(path, schema: DatasetSchema) -> Dataset:
    """Load a CSV file into a Dataset, reordering columns to schema order.

    Extra columns are dropped with a UserWarning; missing columns, non-numeric
    cells, and non-finite values raise.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, header row required") from None
        header = [h.strip() for h in header]
        missing = [c for c in schema.columns if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}")
        extra = [c for c in header if c not in schema.columns]
        if extra:
            warnings.warn(f"{path}: dropping extra column(s) {extra}", stacklevel=2)
        pick = [header.index(c) for c in schema.columns]
        data = []
        for row_num, row in enumerate(reader, start=2):
            if not row:
                continue
            values = []
            for j in pick:
                cell = row[j].strip() if j < len(row) else ""
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric cell {cell!r} at row {row_num}, column {header[j]!r}"
                    ) from None
                if not np.isfinite(values[-1]):
                    raise ValidationError(
                        f"{path}: non-finite value at row {row_num}, column {header[j]!r}"
                    )
            data.append(values)
    rows = np.array(data, dtype=float).reshape(len(data), len(schema.columns))
    return Dataset(schema, rows)


def split_reference_test(dataset: Dataset, reference_fraction: float, seed: int):
    """Seeded disjoint row partition; |reference| = round(fraction * rows)."""
    if not 0.0 < reference_fraction < 1.0:
        raise ValueError(f"reference_fraction must be in (0, 1), got {reference_fraction}")
    n = dataset.row_count
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    n_ref = int(round(reference_fraction * n))
    n_ref = min(max(n_ref, 1), n - 1)
    perm = np.random.default_rng(seed).permutation(n)
    return dataset.take(np.sort(perm[:n_ref])), dataset.take(np.sort(perm[n_ref:]))


@dataclass(frozen=True)
class NormalizationState:
    """Per-column affine scaling statistics over the full schema column list.

    mode 'minmax': shift=min, scale=max-min; 'zscore': shift=mean, scale=std;
    'none': identity. Columns with scale 0 (or boolean pass-through columns in
    minmax mode) are marked in ``skip`` and left untouched; degenerate columns
    map to 0 and back to their constant.
    """

    mode: str
    shift: np.ndarray
    scale: np.ndarray
    skip: np.ndarray  # boolean, per column: identity transform
    degenerate: np.ndarray = field(default=None)  # scale == 0, maps to 0

    def transform(self, values: np.ndarray, col_indices) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = values.copy()
        for k, j in enumerate(col_indices):
            if self.skip[j]:
                continue
            if self.degenerate[j]:
                out[..., k] = 0.0
            else:
                out[..., k] = (values[..., k] - self.shift[j]) / self.scale[j]
        return out

    def inverse(self, values: np.ndarray, col_indices) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = values.copy()
        for k, j in enumerate(col_indices):
            if self.skip[j]:
                continue
            if self.degenerate[j]:
                out[..., k] = self.shift[j]
            else:
                out[..., k] = values[..., k] * self.scale[j] + self.shift[j]
        return out


def fit_normalization(dataset: Dataset, mode: str = "minmax") -> NormalizationState:
    if mode not in ("minmax", "zscore", "none"):
        raise ValueError(f"unknown normalization mode {mode!r}")
    rows, schema = dataset.rows, dataset.schema
    ncol = len(schema.columns)
    skip = np.zeros(ncol, dtype=bool)
    if mode == "none":
        skip[:] = True
        zeros, ones = np.zeros(ncol), np.ones(ncol)
        return NormalizationState("none", zeros, ones, skip, np.zeros(ncol, dtype=bool))
    if mode == "minmax":
        shift = rows.min(axis=0)
        scale = rows.max(axis=0) - shift
    else:
        shift = rows.mean(axis=0)
        scale = rows.std(axis=0)
    # 0/1 parameters are already on the unit scale; scaling them would break
    # the boolean-column invariant of the scaled Dataset.
    for name in schema.boolean_columns:
        skip[schema.columns.index(name)] = True
    degenerate = scale == 0.0
    scale = np.where(degenerate, 1.0, scale)
    return NormalizationState(mode, shift, scale, skip, degenerate)


def normalize(dataset: Dataset, mode: str = "minmax"):
    """Column-wise scale a dataset; returns (scaled dataset, state)."""
    state = fit_normalization(dataset, mode)
    scaled = state.transform(dataset.rows, range(len(dataset.schema.columns)))
    return Dataset(dataset.schema, scaled), state


def denormalize(dataset: Dataset, state: NormalizationState) -> Dataset:
    raw = state.inverse(dataset.rows, range(len(dataset.schema.columns)))
    return Dataset(dataset.schema, raw)
