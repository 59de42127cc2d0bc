"""Command-line experiment runner: run / sweep / render-data.

Exit codes: 0 success, 2 invalid configuration, 3 register capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (ConfigError, ExperimentConfig, load_config,
                          parse_config, render_data, run, sweep, write_records)
from .statevector import CapacityError

EXIT_CONFIG = 2
EXIT_CAPACITY = 3

_CONFIG_FLAGS = ("function", "expression", "method", "N", "L", "M", "margin",
                 "n-shot", "n-shot1", "n-shot2", "n-iter", "delta", "cutoff",
                 "x", "seeds", "margin2d", "workers", "out")


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--statevector", action="store_true",
                        help="exact probabilities instead of shot sampling")
    parser.add_argument("--dump-points", action="store_true",
                        help="also write <out>.points.csv with per-point values")
    for flag in _CONFIG_FLAGS:
        parser.add_argument(f"--{flag}", metavar="V")


def _build_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    pairs = []
    for flag in _CONFIG_FLAGS:
        value = getattr(args, flag.replace("-", "_"))
        if value is not None:
            pairs.append(f"{flag}={value}")
    cfg = parse_config(pairs, base=cfg)
    if args.statevector:
        cfg = parse_config(["statevector=1"], base=cfg)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsrlab",
        description="Readout experiment runner (real-space and Fourier-space "
                    "pipelines on a statevector simulator)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one configuration over its seeds")
    _add_config_flags(p_run)

    p_sweep = sub.add_parser("sweep", help="sweep one axis and fit a log-log slope")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=["M", "n_shot", "N"])
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated ascending values")

    p_rd = sub.add_parser("render-data",
                          help="aggregate a records CSV to mean/stddev rows")
    p_rd.add_argument("--in", dest="in_path", required=True)
    p_rd.add_argument("--out", dest="out_path", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "render-data":
            path = render_data(args.in_path, args.out_path)
            print(path)
            return 0
        cfg = _build_config(args)
        if args.command == "run":
            records = run(cfg)
            slope = None
        else:
            values = [int(v) for v in args.values.split(",") if v]
            records, slope = sweep(cfg, args.axis, values)
        path = write_records(records, cfg.out, cfg, slope,
                             dump_points=args.dump_points)
        print(path)
        if slope is not None:
            print(f"slope {slope:+.4f}")
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
