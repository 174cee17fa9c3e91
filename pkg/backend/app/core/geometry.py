# File: backend/app/core/geometry.py
# Purpose: One-dimensional cavity mode functions and the coupling-sign position solver
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import structlog
from scipy.optimize import brentq

from app.core.errors import InvalidParameterError

logger = structlog.get_logger(__name__)

SignChoice = Literal["equal", "opposite"]

GRID_STEP = 1e-4
ROOT_XTOL = 1e-15
MIN_COUPLING = 1e-6
MAX_RESIDUAL = 1e-12


@dataclass(frozen=True)
class ScaledPosition:
    """Atom position in units of the cavity length, mirrors at +-1/2."""

    r_tilde: float
    n: int

    @property
    def residual(self) -> float:
        return abs(_difference(self.n, self.r_tilde, self.sign))

    @property
    def sign(self) -> SignChoice:
        return "equal" if coupling_signs(self.r_tilde, self.n) > 0 else "opposite"


def _check_mode(n: int) -> None:
    if n < 1:
        raise InvalidParameterError(f"mode index must be >= 1, got {n}")


def scaled_coupling(n: int, r_tilde: float) -> float:
    """sqrt(n pi) sin(n pi (r + 1/2)); the common dipole prefactor is dropped."""
    _check_mode(n)
    if abs(r_tilde) > 0.5:
        raise InvalidParameterError(f"position {r_tilde} lies outside the cavity [-1/2, 1/2]")
    k = n * math.pi
    return math.sqrt(k) * math.sin(k * (r_tilde + 0.5))


def _difference(n: int, r_tilde: float, sign: SignChoice) -> float:
    partner = scaled_coupling(n + 1, r_tilde)
    return scaled_coupling(n, r_tilde) - (partner if sign == "equal" else -partner)


def coupling_signs(r_tilde: float, n: int) -> int:
    """Relative sign of the couplings to modes n+1 and n at a position."""
    product = scaled_coupling(n, r_tilde) * scaled_coupling(n + 1, r_tilde)
    if product == 0:
        raise InvalidParameterError(f"an atom at {r_tilde} does not couple to both modes {n} and {n + 1}")
    return 1 if product > 0 else -1


def solve_position(n: int, sign: SignChoice) -> list[ScaledPosition]:
    """
    All interior positions where the couplings to modes n and n+1 agree in magnitude with the requested sign.

    Roots are bracketed on a grid of step ``GRID_STEP`` and polished with Brent's method; positions where
    the coupling vanishes are dropped.
    """
    _check_mode(n)
    if sign not in ("equal", "opposite"):
        raise InvalidParameterError(f"sign must be 'equal' or 'opposite', got {sign!r}")
    count = int(round(1 / GRID_STEP))
    grid = np.linspace(-0.5, 0.5, count + 1)[1:-1]
    values = np.array([_difference(n, float(r), sign) for r in grid])

    candidates: list[float] = []
    for i in range(len(grid) - 1):
        left, right = values[i], values[i + 1]
        if left == 0:
            candidates.append(float(grid[i]))
        elif left * right < 0:
            root = brentq(lambda r: _difference(n, r, sign), grid[i], grid[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
            candidates.append(float(root))
    if values[-1] == 0:
        candidates.append(float(grid[-1]))

    roots = []
    for r in candidates:
        if abs(scaled_coupling(n, r)) <= MIN_COUPLING:
            continue
        residual = abs(_difference(n, r, sign))
        if residual > MAX_RESIDUAL:
            logger.warning("position_residual_exceeded", n=n, sign=sign, r_tilde=r, residual=residual)
        roots.append(ScaledPosition(r_tilde=r, n=n))
    logger.debug("positions_solved", n=n, sign=sign, count=len(roots))
    return roots


def symmetric_pairs(n: int, tol: float = 1e-9) -> list[tuple[ScaledPosition, ScaledPosition]]:
    """Mirror-image pairs (opposite-sign root, equal-sign root) with distinct positions."""
    equal = solve_position(n, "equal")
    opposite = solve_position(n, "opposite")
    pairs = []
    for first in opposite:
        for second in equal:
            if abs(first.r_tilde + second.r_tilde) <= tol and abs(first.r_tilde - second.r_tilde) > tol:
                pairs.append((first, second))
    pairs.sort(key=lambda pair: abs(pair[0].r_tilde))
    return pairs


def two_atom_positions(n: int = 1, index: int = 0) -> tuple[ScaledPosition, ScaledPosition]:
    """
    One symmetric pair: opposite coupling sign for the first atom, equal for the second.

    Args:
        n: Lower mode index of the pair (n, n + 1)
        index: Which pair, counted outwards from the cavity centre; for n = 1 there is only one

    Raises:
        InvalidParameterError: no symmetric pair exists or ``index`` is out of range
    """
    pairs = symmetric_pairs(n)
    if not pairs:
        raise InvalidParameterError(f"no symmetric two-atom placement for modes {n} and {n + 1}")
    if not 0 <= index < len(pairs):
        raise InvalidParameterError(f"pair index {index} out of range, modes {n} and {n + 1} have {len(pairs)} pairs")
    return pairs[index]
