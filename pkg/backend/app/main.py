# File: backend/app/main.py
# Purpose: Command-line entry point: parses flags, resolves the run config, sets up logging, dispatches commands
import argparse
import sys
import uuid
from typing import Optional, Sequence, TextIO

import structlog

from app.api.schemas.config import RunConfig
from app.api.v1 import oracle, positions, protocol, sweep
from app.config import APP_VERSION, get_settings
from app.dependencies import build_context
from app.infrastructure.logging.setup import setup_logging
from app.middleware.error_handler import EXIT_INVALID, handle_command
from app.utils.validation import GridValidator

logger = structlog.get_logger(__name__)

COMMANDS = {
    "protocol": protocol,
    "sweep": sweep,
    "oracle": oracle,
    "positions": positions,
}

# flag -> RunConfig field; values are passed through unchanged
CONFIG_FLAGS: dict[str, dict] = {
    "--omega": {"type": float},
    "--delta-over-omega": {"type": float},
    "--nmax": {"type": int},
    "--n": {"type": int},
    "--lam": {"type": float},
    "--p-up": {"type": float},
    "--p-kind": {"choices": ["real", "imaginary"]},
    "--method": {"choices": ["exact", "rk4"]},
    "--seed": {"type": int},
    "--reps": {"type": int},
    "--transit": {"choices": ["fixed", "common-stop"]},
    "--gamma-over-lambda": {"type": float},
    "--scenario": {},
    "--chi-max": {"type": float},
    "--gamma-over-lambda-max": {"type": float},
    "--grid-step": {"type": float},
    "--draws": {"type": int},
    "--out": {},
    "--format": {"choices": ["csv", "json"]},
}


def _common_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="JSON file with run-config keys")
    parent.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="override BIMODAL_LOG_LEVEL",
    )
    parent.add_argument("--workers", type=int, help="threads for sweep points and samples")
    parent.add_argument("--sigma-pct", help="comma-separated jitter levels in percent of 1/lambda")
    parent.add_argument("--protocol", action="append", dest="protocols", help="protocol to sweep (repeatable)")
    for flag, options in CONFIG_FLAGS.items():
        parent.add_argument(flag, default=None, **options)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common_parser()
    parser = argparse.ArgumentParser(
        prog="bimodal-sim",
        description="Entanglement generation with qubits in a bimodal cavity: protocols, sweeps and oracles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS.values():
        module.register(subparsers, parent)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    values = {flag.lstrip("-").replace("-", "_"): None for flag in CONFIG_FLAGS}
    for key in values:
        values[key] = getattr(args, key, None)
    if args.sigma_pct is not None:
        values["sigma_pct"] = GridValidator.parse_list(args.sigma_pct, "sigma-pct")
    if args.protocols:
        values["protocols"] = args.protocols
    return values


def _command_line(args: argparse.Namespace) -> str:
    target = getattr(args, "kind", None) or getattr(args, "family", None) or getattr(args, "name", None)
    return args.command if not target else f"{args.command} {target}"


@handle_command
def _dispatch(args: argparse.Namespace, stdout: Optional[TextIO]) -> int:
    settings = get_settings()
    config = RunConfig.resolve(args.config, _overrides(args), defaults={"seed": settings.DEFAULT_SEED})
    ctx = build_context(_command_line(args), config, args.workers, stdout)
    structlog.contextvars.bind_contextvars(run_id=uuid.uuid4().hex[:12], command=ctx.command, seed=config.seed)
    try:
        return COMMANDS[args.command].run(args, ctx)
    finally:
        structlog.contextvars.clear_contextvars()


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Run one command and return its exit code.

    Exit codes: 0 success, 1 internal error or failed check, 2 invalid or infeasible input.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else 0

    settings = get_settings()
    setup_logging(
        log_level=args.log_level or settings.LOG_LEVEL,
        log_dir=settings.LOG_DIR,
        app_name=settings.APP_NAME,
        log_format=settings.LOG_FORMAT,
    )
    return _dispatch(args, stdout)


if __name__ == "__main__":
    sys.exit(main())
