"""Command-line driver: presets, sweeps, single cycles and the invariant suite."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import ConfigIoError, InvalidOverride, InvalidSweep, SpinOttoError, UnknownPreset
from .logs import configure_logging
from .models import RunRecord
from .presets import PRESETS, run_preset
from .settings import get_settings
from .sweep import load_config, load_sweep_spec, parse_set_flags, run_sweep
from .thermo import run_cycle_numeric
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_PHYSICS_ERROR = 3

INPUT_ERRORS = (UnknownPreset, InvalidOverride, InvalidSweep, ConfigIoError)


def _emit_error(exc: SpinOttoError) -> None:
    print(json.dumps({"ok": False, **exc.detail}), file=sys.stderr)


def _summary(record: RunRecord, out: Path) -> Dict[str, Any]:
    return {
        "ok": True,
        "csv": str(out),
        "rows": len(record.rows),
        "failed_points": record.metadata["failed_points"],
        "config_hash": record.config_hash,
    }


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a cycle parameter (repeatable), e.g. --set gamma=0.5 --set tau=inf",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spin-otto", description="Two-spin quantum Otto cycle simulations")
    parser.add_argument("--log-level", default=None, help="Override SPIN_OTTO_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    preset = sub.add_parser("preset", help="Run a named experiment preset and write its CSV")
    preset.add_argument("name", help=f"One of: {', '.join(PRESETS)}")
    preset.add_argument("--out", type=Path, default=None, help="CSV path (default: <output_dir>/<name>.csv)")
    preset.add_argument("--threads", type=int, default=None, help="Worker processes (default: SPIN_OTTO_THREADS)")
    _add_overrides(preset)

    sweep = sub.add_parser("sweep", help="Run a parameter sweep described by a KEY=VALUE document")
    sweep.add_argument("spec", type=Path, help="Sweep document")
    sweep.add_argument("--out", type=Path, default=None, help="CSV path (default: <output_dir>/<spec stem>.csv)")
    sweep.add_argument("--threads", type=int, default=None, help="Worker processes (default: SPIN_OTTO_THREADS)")
    _add_overrides(sweep)

    cycle = sub.add_parser("cycle", help="Run one cycle and print the result as JSON")
    cycle.add_argument("config", type=Path, nargs="?", default=None, help="Cycle document (optional)")
    cycle.add_argument(
        "--strict", action="store_true", help="Fail when a finite cold isochore does not close the cycle"
    )
    cycle.add_argument("--settle-cycles", type=int, default=1, help="Cycles to run before bookkeeping")
    _add_overrides(cycle)

    sub.add_parser("validate", help="Run the invariant suite")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    settings = get_settings()

    try:
        if args.command == "validate":
            return EXIT_OK if run_validation() else EXIT_VALIDATION_FAILED

        overrides = parse_set_flags(args.overrides)

        if args.command == "preset":
            out = args.out or settings.output_dir / f"{args.name}.csv"
            record = run_preset(args.name, overrides, out=out, threads=args.threads)
            print(json.dumps(_summary(record, out)))
            return EXIT_OK

        if args.command == "sweep":
            spec = load_sweep_spec(args.spec, overrides)
            out = args.out or settings.output_dir / f"{args.spec.stem}.csv"
            record = run_sweep(spec, out=out, threads=args.threads)
            print(json.dumps(_summary(record, out)))
            return EXIT_OK

        if args.command == "cycle":
            cfg = load_config(args.config, overrides)
            result = run_cycle_numeric(cfg, strict=args.strict, settle_cycles=args.settle_cycles)
            print(result.model_dump_json())
            return EXIT_OK
    except INPUT_ERRORS as exc:
        _emit_error(exc)
        return EXIT_BAD_INPUT
    except SpinOttoError as exc:
        _emit_error(exc)
        return EXIT_PHYSICS_ERROR

    parser.error(f"unknown command {args.command}")
    return EXIT_BAD_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
