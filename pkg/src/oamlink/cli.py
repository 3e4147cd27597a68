"""Command-line entry point: one subcommand per experiment.

Exit codes: 0 on success, 1 on configuration errors, 2 on runtime errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import EXPERIMENT_NAMES, ConfigError, ExperimentSpec, parse_config, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamlink",
        description="UCA-based LoS OAM link experiments (hybrid vs electronic beam steering)",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENT_NAMES:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, default=None, help="key-value config file")
        p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the annealer seed")
        p.add_argument("--workers", type=int, default=1, help="parallel sweep workers")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {}
        if args.config is not None:
            try:
                text = args.config.read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
            overrides = parse_config(text)
        spec = ExperimentSpec.resolve(args.experiment, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        csv_path, manifest_path = run(spec, args.out, seed=args.seed, workers=args.workers)
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit code 2
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    print(csv_path)
    print(manifest_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
