# File: backend/app/api/v1/protocol.py
# Purpose: `protocol` command: run a catalogued protocol noiselessly and dump its final amplitudes
import argparse

import numpy as np
import structlog

from app.api.schemas.protocol import ProtocolRequest
from app.api.schemas.sweep import SweepResult
from app.core.hilbert import format_label
from app.dependencies import CommandContext
from app.services.protocol_service import build_protocol, protocol_catalog, run_ideal

logger = structlog.get_logger(__name__)

FIDELITY_FLOOR = 1 - 1e-6
AMPLITUDE_CUTOFF = 1e-12


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("protocol", parents=[parent], help="run one generation protocol")
    parser.add_argument("name", nargs="?", help="protocol name (see --list)")
    parser.add_argument("--list", action="store_true", help="print the protocol catalog")


def request_from(name: str, ctx: CommandContext) -> ProtocolRequest:
    cfg = ctx.config
    return ProtocolRequest(
        name=name,
        omega=cfg.omega,
        delta_over_omega=cfg.delta_over_omega,
        nmax=cfg.nmax,
        n=cfg.n,
        p_up=cfg.p_up,
        p_kind=cfg.p_kind,
        lam=cfg.lam,
    )


def catalog_table() -> SweepResult:
    return SweepResult(kind="protocol", columns=["name", "scheme", "description"], rows=protocol_catalog())


def amplitude_table(name: str, ctx: CommandContext) -> tuple[SweepResult, float]:
    """
    Final amplitudes above the cutoff as (basis, re, im) rows.

    Returns:
        The table and the fidelity with the printed target
    """
    spec = build_protocol(request_from(name, ctx))
    final, fidelity = run_ideal(spec)
    rows = [
        {"basis": format_label(int(i), spec.layout), "re": float(final[i].real), "im": float(final[i].imag)}
        for i in np.flatnonzero(np.abs(final) > AMPLITUDE_CUTOFF)
    ]
    summary = {
        "protocol": spec.name,
        "scheme": spec.scheme,
        "fidelity": fidelity,
        "ideal_time": spec.ideal_time,
    }
    return SweepResult(kind="protocol", columns=["basis", "re", "im"], rows=rows, summary=summary), fidelity


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    if args.list or not args.name:
        ctx.emit(catalog_table())
        return 0
    table, fidelity = amplitude_table(args.name, ctx)
    ctx.emit(table)
    return 0 if fidelity >= FIDELITY_FLOOR else 1
