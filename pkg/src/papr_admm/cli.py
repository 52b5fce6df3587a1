"""Command-line entry point: ``papr-admm <experiment> [options]``.

Exit codes: 0 success, 2 configuration error (including bad arguments),
3 I/O error, 1 anything else.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .config import ExperimentConfig, parse_config
from .errors import ConfigError, ConfigValueError
from .experiments import STAGES, run

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="papr-admm",
        description="Run the PAPR-reduction experiments and write CSV results.",
    )
    p.add_argument("experiment", choices=[*STAGES, "all"])
    p.add_argument("--config", help="TOML config file (defaults apply to missing keys)")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, help="master seed (overrides master_seed)")
    p.add_argument("--symbols", type=int, help="symbols per experiment (overrides n_symbols)")
    p.add_argument("--workers", type=int, help="worker processes (overrides workers)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    changes = {}
    if args.out is not None:
        changes["output_dir"] = args.out
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigValueError("--seed", "must be an unsigned 64-bit integer")
        changes["master_seed"] = args.seed
    if args.symbols is not None:
        if args.symbols < 1:
            raise ConfigValueError("--symbols", "must be >= 1")
        changes["n_symbols"] = args.symbols
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigValueError("--workers", "must be >= 1")
        changes["workers"] = args.workers
    return replace(cfg, **changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(args.config) if args.config else ExperimentConfig()
        cfg = _apply_overrides(cfg, args)
        run(args.experiment, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - top-level categorization
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
