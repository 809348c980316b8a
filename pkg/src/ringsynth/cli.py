"""Command-line entry points.

Two subcommands drive the pipeline:

    ringsynth run <config>       synthesize and emit result files
    ringsynth validate <config>  schema plus feasibility checks, no solve

Exit codes: 0 on success (including completed-but-unconverged runs, which
carry a warning in the report), 2 for config problems, 3 for numerical
failures.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import load_config_file, resolve_config
from .errors import ConfigError, DegeneratePatternError, SingularSystemError
from .runner import run_synthesis, summary_lines, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

BUNDLED_EXAMPLES = (
    "example-a-flattop",
    "example-b-difference",
    "example-c-equiripple",
    "example-d-nulls",
)


def bundled_config_path(name: str) -> Path:
    """Filesystem path of a bundled example config."""
    stem = name.removesuffix(".json")
    if stem not in BUNDLED_EXAMPLES:
        raise KeyError(f"no bundled config named {name!r}; have {BUNDLED_EXAMPLES}")
    return Path(str(resources.files("ringsynth.configs").joinpath(f"{stem}.json")))


def _locate_config(argument: str) -> Path:
    path = Path(argument)
    if path.exists():
        return path
    try:
        return bundled_config_path(argument)
    except KeyError:
        return path  # let the loader report the missing file


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringsynth",
        description="Synthesize ring-array excitation weights from a desired pattern.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a synthesis config and emit result files")
    run.add_argument("config", help="config file path or bundled example name")
    run.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
    run.add_argument("--grid", type=int, metavar="POINTS", help="cut grid resolution")
    run.add_argument("--passes", type=int, metavar="N", help="maximum refinement passes")
    run.add_argument("--surface", action="store_true", help="also emit surface.csv")
    run.add_argument("--quiet", action="store_true", help="suppress console summary")

    val = sub.add_parser("validate", help="validate a config without solving")
    val.add_argument("config", help="config file path or bundled example name")
    return parser


def _apply_overrides(raw: dict, args: argparse.Namespace) -> dict:
    raw = dict(raw)
    output = dict(raw.get("output", {})) if isinstance(raw.get("output", {}), dict) else {}
    solver = dict(raw.get("solver", {})) if isinstance(raw.get("solver", {}), dict) else {}
    if args.out is not None:
        output["directory"] = args.out
    if args.grid is not None:
        output["grid_points"] = args.grid
    if args.surface:
        output["surface"] = True
    if args.passes is not None:
        solver["max_passes"] = args.passes
    if output:
        raw["output"] = output
    if solver:
        raw["solver"] = solver
    return raw


def _cmd_run(args: argparse.Namespace) -> int:
    config_path = _locate_config(args.config)
    try:
        raw = load_config_file(config_path)
        raw = _apply_overrides(raw, args)
        cfg, warnings = resolve_config(raw, base_dir=config_path.parent)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        report = run_synthesis(cfg, warnings=warnings)
    except SingularSystemError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DegeneratePatternError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    written = write_outputs(report, cfg.out_dir)
    if not args.quiet:
        for line in summary_lines(report):
            print(line)
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    config_path = _locate_config(args.config)
    try:
        raw = load_config_file(config_path)
        _, warnings = resolve_config(raw, base_dir=config_path.parent)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    for warning in warnings:
        print(f"warning: {warning}")
    print(f"{config_path}: ok")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_validate(args)


def console_entry() -> None:
    raise SystemExit(main())
