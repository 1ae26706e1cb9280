"""``ghostpin`` command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import scipy.fft

from . import __version__, commands
from .config import RunConfig, load_config
from .exceptions import ConfigError, NumericalError
from .reproduce import FIGURES

log = logging.getLogger("ghostpin")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghostpin", description="Lensless biphoton ghost-imaging simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run configuration file")
    common.add_argument("--out", type=Path, help="output directory (default: [output] directory)")
    common.add_argument("--threads", type=int, default=1, help="FFT worker threads")
    common.add_argument("--mode", choices=["paraxial", "exact"], help="override propagation mode")
    common.add_argument("--pm", choices=["sinc", "gaussian"], help="override phase-matching model")
    common.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("jsp", parents=[common], help="joint spatial probability matrix and preview")
    sub.add_parser("ghost", parents=[common], help="bucket-detector ghost pattern")
    p = sub.add_parser("analytic", parents=[common], help="closed-form design report")
    p.add_argument("--threshold", type=float, help="visibility threshold (default 0.4)")
    p = sub.add_parser("sweep", parents=[common], help="closed-form quantities along one parameter")
    p.add_argument("--axis", choices=["sigma_p", "d", "l_z"])
    p.add_argument("--points", type=int)
    sub.add_parser("optimize", parents=[common], help="optimal pump width")
    p = sub.add_parser("reproduce", parents=[common], help="reproduce a published figure")
    p.add_argument("--figure", choices=sorted(FIGURES), required=True)
    return parser


def _load(args) -> RunConfig:
    if args.config is None:
        if args.command == "reproduce":
            return RunConfig()
        raise ConfigError(f"{args.command} needs --config")
    cfg = load_config(args.config)
    cfg = cfg.with_overrides(propagation_mode=args.mode, pm_model=args.pm)
    run_changes = {}
    for key in ("threshold", "axis", "points"):
        value = getattr(args, key, None)
        if value is not None:
            run_changes[key] = value
    if run_changes:
        cfg = replace(cfg, run=replace(cfg.run, **run_changes))
    return cfg


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore")
    try:
        cfg = _load(args)
        out = args.out or Path(cfg.output.directory)
        with scipy.fft.set_workers(max(1, args.threads)):
            if args.command == "jsp":
                paths = commands.cmd_jsp(cfg, out)
            elif args.command == "ghost":
                paths = commands.cmd_ghost(cfg, out)
            elif args.command == "analytic":
                paths = commands.cmd_analytic(cfg, args.out)
            elif args.command == "sweep":
                paths = commands.cmd_sweep(cfg, out)
            elif args.command == "optimize":
                paths = commands.cmd_optimize(cfg, args.out)
            else:
                paths = FIGURES[args.figure](args.out or Path("out") / args.figure)
    except ConfigError as exc:
        print(f"ghostpin: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"ghostpin: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for p in paths:
        log.info("wrote %s", p)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
