#!/usr/bin/env python3
"""Run every bundled study config and render the resulting CSVs to SVG.

Outputs land under --out/<config-stem>/. Rerunning with the same configs
produces byte-identical files.
"""

import argparse
import sys
from pathlib import Path

from seqdesign.cli import main as cli_main

STUDY_BY_CONFIG = {
    "gen_quadratic": "gen",
    "refsize_quadratic": "sweep-refsize",
    "inpaint_gated": "sweep-inpaint",
    "noise_linear": "study-noise",
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--configs", default=Path(__file__).resolve().parent.parent / "configs")
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args()

    for ini in sorted(Path(args.configs).glob("*.ini")):
        study = STUDY_BY_CONFIG.get(ini.stem)
        if study is None:
            print(f"skipping {ini.name}: no registered study", file=sys.stderr)
            continue
        out = Path(args.out) / ini.stem
        argv = [study, "--config", str(ini), "--out", str(out)]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        code = cli_main(argv)
        if code != 0:
            return code
        csvs = [str(p) for p in sorted(out.glob("*.csv"))]
        code = cli_main(["plot", *csvs, "--out", str(out)])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
