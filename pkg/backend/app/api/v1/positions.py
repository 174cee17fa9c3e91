# File: backend/app/api/v1/positions.py
# Purpose: `positions` command: atom positions giving equal coupling magnitudes to modes n and n+1
import argparse

from app.api.schemas.sweep import SweepResult
from app.core.geometry import scaled_coupling, solve_position
from app.dependencies import CommandContext


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("positions", parents=[parent], help="solve the cavity-geometry sign conditions")
    parser.add_argument("--sign", choices=["equal", "opposite", "both"], default="both")


def position_table(n: int, signs: list[str]) -> SweepResult:
    rows = []
    for sign in signs:
        for root in solve_position(n, sign):
            rows.append(
                {
                    "sign": sign,
                    "r_tilde": root.r_tilde,
                    "residual": root.residual,
                    "coupling_n": scaled_coupling(n, root.r_tilde),
                    "coupling_n_plus_1": scaled_coupling(n + 1, root.r_tilde),
                }
            )
    return SweepResult(
        kind="positions",
        columns=["sign", "r_tilde", "residual", "coupling_n", "coupling_n_plus_1"],
        rows=rows,
        summary={"n": n},
    )


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    n = ctx.config.n or 1
    signs = ["equal", "opposite"] if args.sign == "both" else [args.sign]
    ctx.emit(position_table(n, signs))
    return 0
