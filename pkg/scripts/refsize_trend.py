#!/usr/bin/env python3
"""Print the reference-size accuracy trend as a small table.

Runs the sweep from configs/refsize_quadratic.ini (or a supplied config) and
reports per-size MAPE, confirming that accuracy improves as the reference
grows.
"""

import argparse
import sys
import tempfile
from pathlib import Path

from seqdesign.experiments import load_config, run_reference_size_sweep
from seqdesign.plots import read_result_csv

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "refsize_quadratic.ini"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=DEFAULT_CONFIG)
    args = parser.parse_args()

    config = load_config(args.config)
    with tempfile.TemporaryDirectory() as tmp:
        path = run_reference_size_sweep(config, tmp)[0]
        _, rows = read_result_csv(path)
    print(f"{'size':>8} {'mape_percent':>14} {'mae':>12}  indicator")
    for size, mape_percent, mae, indicator in rows:
        print(f"{int(size):>8} {float(mape_percent):>14.3f} {float(mae):>12.5f}  {indicator}")
    mapes = {int(r[0]): float(r[1]) for r in rows}
    first, last = min(mapes), max(mapes)
    print(f"\nMAPE {mapes[first]:.3f}% @ {first} -> {mapes[last]:.3f}% @ {last}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
