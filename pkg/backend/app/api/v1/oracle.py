# File: backend/app/api/v1/oracle.py
# Purpose: `oracle` command: closed-form vs propagator property suites with a pass/fail exit code
import argparse

from app.dependencies import CommandContext
from app.services.oracle_service import OracleSettings, get_oracle_registry, run_oracles

DEFAULT_VALIDITY_RATIO = 20.0


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("oracle", parents=[parent], help="check closed forms against dense propagation")
    parser.add_argument("family", choices=[*get_oracle_registry().names(), "all"])


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    cfg = ctx.config
    settings = OracleSettings(
        draws=cfg.draws,
        seed=cfg.seed,
        delta_over_omega=cfg.delta_over_omega if cfg.delta_over_omega is not None else DEFAULT_VALIDITY_RATIO,
    )
    result = run_oracles([args.family], settings)
    ctx.emit(result)
    return 0 if result.summary["passed"] else 1
