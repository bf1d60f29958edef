"""Command-line entry point.

Exit codes: 0 success, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments
from .errors import ConfigError, SeqDesignError
from .plots import emit_plots

_STUDIES = {
    "gen": lambda cfg, out: experiments.run_generation_eval(cfg, out),
    "inpaint": lambda cfg, out: experiments.run_inpaint_once(cfg, out),
    "eval": lambda cfg, out: experiments.run_generation_eval(cfg, out),
    "sweep-refsize": lambda cfg, out: experiments.run_reference_size_sweep(cfg, out),
    "sweep-inpaint": lambda cfg, out: experiments.run_inpainting_sweep(cfg, out),
    "study-order": lambda cfg, out: experiments.run_order_study(cfg, out),
    "study-noise": lambda cfg, out: experiments.run_noise_study(cfg, out),
    "study-refsets": lambda cfg, out: experiments.run_reference_variation_study(cfg, out),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdesign", description="Sequential conditional design generation studies"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _STUDIES:
        p = sub.add_parser(name, help=f"run the {name} study")
        p.add_argument("--config", required=True, help="experiment config file (INI)")
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--backend", choices=("kernel", "knn", "remote"), default=None)
        p.add_argument("--endpoint", default=None, help="remote backend URL")
    p = sub.add_parser("plot", help="render result CSVs to SVG")
    p.add_argument("csvs", nargs="+", help="result CSV files")
    p.add_argument("--out", default="results", help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plot":
            for path in emit_plots(args.csvs, args.out):
                print(path)
            return 0
        config = experiments.load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.backend is not None:
            config.regressor.backend = args.backend
        if args.endpoint is not None:
            config.regressor.endpoint = args.endpoint
        experiments.validate_config(config)
        Path(args.out).mkdir(parents=True, exist_ok=True)
        for path in _STUDIES[args.command](config, args.out):
            print(path)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SeqDesignError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
