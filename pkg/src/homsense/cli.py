"""Command-line entry point.

One subcommand per experiment; configuration comes from a strict JSON
file with CLI overrides for seed, output path and format.  Exit codes:
0 success (warnings stay inside the output), 2 configuration error,
3 numeric failure.
"""

import argparse
import json
import sys

from .errors import ConfigError, HomsenseError
from .scenarios import EXPERIMENTS, RUNNERS, parse_config, write_dataset

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homsense",
        description="Tilt-angle sensing simulator: two-photon coincidence "
                    "interferometry versus single-photon baselines.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", metavar="PATH",
                       help="JSON scenario config (defaults apply if omitted)")
        p.add_argument("--seed", type=int, metavar="U64",
                       help="override the config seed")
        p.add_argument("--out", metavar="PATH", help="output file path")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (default csv)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        raw = {}
        if args.config is not None:
            try:
                with open(args.config, "r", encoding="utf-8") as fh:
                    raw = json.load(fh)
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
        cfg = parse_config(raw, args.experiment, seed=args.seed,
                           out_path=args.out, out_format=args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        dataset = RUNNERS[cfg.experiment](cfg)
        write_dataset(dataset, cfg.out_path, cfg.out_format)
    except HomsenseError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    for warning in dataset.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"{cfg.experiment}: wrote {len(dataset.rows)} rows to "
          f"{cfg.out_path} (seed={cfg.seed})")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
