# File: backend/app/api/v1/sweep.py
# Purpose: `sweep` command: fidelity vs dissipation, fidelity vs jitter, and SASA violation sweeps
import argparse

import structlog

from app.api.schemas.sweep import SweepResult
from app.api.v1.protocol import request_from
from app.core.params import JitterConfig
from app.dependencies import CommandContext
from app.services.dissipation_service import chi_sweep, scenario_by_name
from app.services.jitter_service import jitter_sweep
from app.services.nonlocality_service import sasa_sweep
from app.services.protocol_service import build_protocol
from app.utils.validation import GridValidator

logger = structlog.get_logger(__name__)

SWEEP_KINDS = ("dissipation", "jitter", "sasa")

DEFAULT_PROTOCOLS = {
    "dissipation": ("bell-modes", "w3-hybrid", "wt-hybrid"),
    "jitter": ("ghz3", "w-dispersive", "wN-dispersive"),
}


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("sweep", parents=[parent], help="figure-style parameter sweeps")
    parser.add_argument("kind", choices=SWEEP_KINDS)


def _protocols(kind: str, ctx: CommandContext) -> list[str]:
    return list(ctx.config.protocols) or list(DEFAULT_PROTOCOLS[kind])


def _jitter_config(ctx: CommandContext) -> JitterConfig:
    cfg = ctx.config
    return JitterConfig(reps=cfg.reps, seed=cfg.seed, transit=cfg.transit)


def dissipation(ctx: CommandContext) -> SweepResult:
    cfg = ctx.config
    scenario = scenario_by_name(cfg.scenario)
    grid = GridValidator.uniform(cfg.chi_max, cfg.grid_step)
    results = [
        chi_sweep(build_protocol(request_from(name, ctx)), scenario, grid, cfg.method, ctx.workers)
        for name in _protocols("dissipation", ctx)
    ]
    return SweepResult.concat(results)


def jitter(ctx: CommandContext) -> SweepResult:
    cfg = ctx.config
    results = [
        jitter_sweep(
            build_protocol(request_from(name, ctx)),
            cfg.sigma_pct,
            _jitter_config(ctx),
            gamma=cfg.gamma_over_lambda * cfg.lam,
            max_workers=ctx.workers,
        )
        for name in _protocols("jitter", ctx)
    ]
    return SweepResult.concat(results)


def sasa(ctx: CommandContext) -> SweepResult:
    cfg = ctx.config
    grid = GridValidator.uniform(cfg.gamma_over_lambda_max, cfg.grid_step)
    return sasa_sweep(grid, cfg.sigma_pct, _jitter_config(ctx), lam=cfg.lam, max_workers=ctx.workers)


SWEEPS = {"dissipation": dissipation, "jitter": jitter, "sasa": sasa}


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    logger.info("sweep_started", kind=args.kind, seed=ctx.config.seed, workers=ctx.workers)
    result = SWEEPS[args.kind](ctx)
    ctx.emit(result)
    logger.info("sweep_completed", kind=args.kind, rows=len(result.rows))
    return 0
