"""Command-line driver: ``tcs run <config>`` and ``tcs validate <config>``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ExperimentConfig, diagnostics, read_json
from .errors import ConfigParseError, SchemaError, TCSError
from .runner import run_experiment

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_SCHEMA = 4
EXIT_NUMERICAL = 5
EXIT_IO = 6

DEFAULT_OUTPUT_DIR = "tcs_output"

EPILOG = f"""\
exit codes:
  {EXIT_OK}  success
  2  command-line usage error
  {EXIT_PARSE}  config file unreadable or not valid JSON (ConfigParseError)
  {EXIT_SCHEMA}  config violates the schema or an invariant (SchemaError)
  {EXIT_NUMERICAL}  numerical/module error during the run (caustic, grid too narrow,
     propagator phase-wrap guard, ...)
  {EXIT_IO}  output files could not be written
"""


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tcs",
        description="Trajectory-coherent state experiments: trajectories, Riccati traces, "
                    "uncertainty minimality and split-operator cross-checks.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a JSON config",
                         epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("config", type=Path)
    run.add_argument("--output-dir", type=Path, default=None, help="overrides output_dir from the config")
    run.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    val = sub.add_parser("validate", help="check a config without running it",
                         epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    val.add_argument("config", type=Path)
    val.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return p


def _validate(path: Path, quiet: bool) -> int:
    try:
        raw = read_json(path)
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    problems = diagnostics(raw)
    if problems:
        for msg in problems:
            print(f"{path}: {msg}", file=sys.stderr)
        return EXIT_SCHEMA
    if not quiet:
        print("OK")
    return EXIT_OK


def _run(path: Path, output_dir: Path | None, quiet: bool) -> int:
    try:
        cfg = ExperimentConfig.from_dict(read_json(path), base_dir=path.parent)
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SchemaError as exc:
        for msg in exc.diagnostics:
            print(f"{path}: {msg}", file=sys.stderr)
        return EXIT_SCHEMA
    out = output_dir or cfg.output_dir or Path(DEFAULT_OUTPUT_DIR)
    try:
        summary = run_experiment(cfg, out)
    except TCSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: cannot write outputs to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if not quiet:
        verdict = summary["minimality"]["verdict"]
        print(f"{cfg.experiment}: {summary['n_samples']} samples, verdict {verdict}, outputs in {out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "validate":
        return _validate(args.config, args.quiet)
    return _run(args.config, args.output_dir, args.quiet)


if __name__ == "__main__":
    sys.exit(main())
