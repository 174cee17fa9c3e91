# File: backend/app/services/nonlocality_service.py
# Purpose: Four-qubit SASA Bell operator, its expectation on generated cluster states and violation sweeps
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import structlog
from scipy.optimize import brentq

from app.api.schemas.protocol import ProtocolRequest
from app.api.schemas.sweep import SweepResult
from app.core.dispersive import cluster_time
from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hilbert import expectation, pauli
from app.core.numkit import DenseMatrix, dagger, identity, is_hermitian, kron_all
from app.core.params import JitterConfig
from app.services.jitter_service import FinalState, JitterSimulator, monte_carlo
from app.services.protocol_service import build_protocol, sasa_factors
from app.utils.validation import GridValidator

logger = structlog.get_logger(__name__)

LOCAL_BOUND = 2.0
QUANTUM_MAX = 4.0

# (coefficient, per-qubit Pauli labels); "i" is the identity
SASA_TERMS: tuple[tuple[int, str], ...] = (
    (1, "xixz"),
    (1, "xiyy"),
    (1, "zyyz"),
    (-1, "zyxy"),
)


@dataclass(frozen=True)
class SasaOperator:
    matrix: DenseMatrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _pauli_string(labels: str) -> DenseMatrix:
    return kron_all(identity(2) if c == "i" else pauli(c) for c in labels)


@lru_cache(maxsize=1)
def sasa_operator() -> SasaOperator:
    """Sum of the four signed Pauli strings; Hermitian and traceless on four qubits."""
    matrix = sum(coefficient * _pauli_string(labels) for coefficient, labels in SASA_TERMS)
    if not is_hermitian(matrix):
        raise DimensionMismatchError("SASA operator is not Hermitian")
    return SasaOperator(matrix=matrix)


@lru_cache(maxsize=1)
def sasa_transformation() -> DenseMatrix:
    """T = -H sigma_x x 1 x sigma_x x H, mapping the generated cluster onto the SASA frame."""
    return kron_all(sasa_factors())


def _check_register(state: FinalState) -> None:
    if state.shape[0] != 16:
        raise DimensionMismatchError(f"SASA acts on four qubits (dim 16), got dim {state.shape[0]}")


def sasa_expectation(state: FinalState) -> float:
    """
    <B> after rotating the state into the SASA frame: Tr(B T rho T^dag).

    Args:
        state: Four-qubit ket or density matrix in the generation frame
    """
    _check_register(state)
    t = sasa_transformation()
    if state.ndim == 1:
        rotated = t @ state
    else:
        rotated = t @ state @ dagger(t)
    return float(expectation(sasa_operator().matrix, rotated).real)


def sasa_expectation_heisenberg(state: FinalState) -> float:
    """Same value with the operator transformed instead: Tr(T^dag B T rho)."""
    _check_register(state)
    t = sasa_transformation()
    return float(expectation(dagger(t) @ sasa_operator().matrix @ t, state).real)


def _random_qubit(rng: np.random.Generator) -> np.ndarray:
    theta = math.acos(rng.uniform(-1.0, 1.0))
    phi = rng.uniform(0.0, 2 * math.pi)
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)], dtype=np.complex128)


def local_bound_check(samples: int = 200, rng: Optional[np.random.Generator] = None) -> float:
    """Largest <B> found over random four-qubit product states; local realism caps it at 2."""
    rng = rng if rng is not None else np.random.default_rng(0)
    b = sasa_operator().matrix
    best = -math.inf
    for _ in range(samples):
        psi = kron_all(_random_qubit(rng).reshape(-1, 1) for _ in range(4)).reshape(-1)
        best = max(best, float(expectation(b, psi).real))
    logger.debug("local_bound_checked", samples=samples, max_value=best)
    return best


def decayed_cluster_expectation(gamma_over_lambda: float) -> float:
    """
    Exact <B> for the cluster generated at its ideal time under qubit decay alone (no jitter).

    Decay keeps the state block-diagonal in excitation number. The two-excitation block holds the
    ideal state with weight x^2, x = exp(-gamma t*). The one-excitation block enters only through
    the |3><4| coherence and adds -omega^2 / (gamma^2 + 4 omega^2) x (1 - x), omega = 4 sqrt2 lambda.
    The ground state does not contribute.
    """
    if gamma_over_lambda < 0:
        raise InvalidParameterError(f"gamma/lambda must be >= 0, got {gamma_over_lambda}")
    omega_sq = 32.0
    x = math.exp(-gamma_over_lambda * cluster_time())
    return QUANTUM_MAX * x**2 - omega_sq / (gamma_over_lambda**2 + 4 * omega_sq) * x * (1 - x)


def decay_threshold(upper: float = 4.0) -> float:
    """gamma/lambda at which the jitter-free curve crosses the local bound."""
    return float(brentq(lambda g: decayed_cluster_expectation(g) - LOCAL_BOUND, 0.0, upper, xtol=1e-12))


def violation_threshold(gammas: Sequence[float], values: Sequence[float], level: float = LOCAL_BOUND) -> Optional[float]:
    """
    First gamma where the curve drops below ``level``, by linear interpolation between grid points.

    Returns None when the curve never falls below the level; returns the first grid point when it
    starts below.
    """
    if values and values[0] < level:
        return float(gammas[0])
    for (g0, v0), (g1, v1) in zip(zip(gammas, values), zip(gammas[1:], values[1:])):
        if v0 >= level > v1:
            return float(g0 + (v0 - level) * (g1 - g0) / (v0 - v1))
    return None


def sasa_sweep(
    gamma_grid: Sequence[float],
    jitter_pcts: Sequence[float],
    cfg: JitterConfig,
    lam: float = 1.0,
    max_workers: int = 1,
) -> SweepResult:
    """
    Mean <B> over jittered, decaying cluster generations for every (gamma/lambda, jitter%) pair.

    Args:
        gamma_grid: Qubit decay rates in units of lambda, strictly increasing
        jitter_pcts: Jitter standard deviations in percent of 1/lambda
        cfg: reps, seed and transit model; its sigma_fraction is ignored
        lam: Effective coupling
        max_workers: Threads used for Monte Carlo samples

    Returns:
        SweepResult with columns (gamma_over_lambda, jitter_pct, mean_B, stderr, reps, seed,
        threshold_gamma_star); the threshold column holds the crossing of that row's jitter curve
        and the summary holds the zero-jitter crossing together with the local bound
    """
    gammas = GridValidator.validate(gamma_grid, "gamma grid")
    jitters = sorted(set(GridValidator.validate(sorted(set(jitter_pcts)), "jitter percents")))
    spec = build_protocol(ProtocolRequest(name="cluster4", lam=lam))

    curves: dict[float, list[tuple[float, float]]] = {}
    for pct in jitters:
        point_cfg = cfg.model_copy(update={"sigma_fraction": pct / 100.0})
        curve = []
        for index, gamma in enumerate(gammas):
            simulator = JitterSimulator(spec, gamma * lam)
            estimate = monte_carlo(simulator, point_cfg, measure=sasa_expectation, max_workers=max_workers)
            logger.debug("sweep_point_completed", kind="sasa", jitter_pct=pct, index=index, value=estimate.mean)
            curve.append((estimate.mean, estimate.stderr))
        curves[pct] = curve

    thresholds = {pct: violation_threshold(gammas, [mean for mean, _ in curve]) for pct, curve in curves.items()}
    rows = [
        {
            "gamma_over_lambda": gamma,
            "jitter_pct": pct,
            "mean_B": mean,
            "stderr": stderr,
            "reps": cfg.reps,
            "seed": cfg.seed,
            "threshold_gamma_star": thresholds[pct],
        }
        for pct, curve in curves.items()
        for gamma, (mean, stderr) in zip(gammas, curve)
    ]
    summary = {"local_bound": LOCAL_BOUND, "threshold_gamma_star": thresholds.get(0.0)}
    logger.info("sasa_sweep_completed", threshold_gamma_star=summary["threshold_gamma_star"], jitters=jitters)
    return SweepResult(
        kind="sasa",
        columns=[
            "gamma_over_lambda",
            "jitter_pct",
            "mean_B",
            "stderr",
            "reps",
            "seed",
            "threshold_gamma_star",
        ],
        rows=rows,
        summary=summary,
        seed=cfg.seed,
    )
