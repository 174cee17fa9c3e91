# File: backend/app/services/oracle_service.py
# Purpose: Closed-form vs dense-propagator property suites and the dispersive-regime validity check
"""
Oracle families.

Each family draws random parameters, evaluates a closed form from ``app.core.analytic`` or
``app.core.dispersive`` and the same quantity by dense matrix exponentiation of the Hamiltonian,
and reports the largest absolute amplitude deviation. ``dispersive-validity`` instead propagates
the full bimodal model deep in the dispersive regime and reports the fidelity of the result with
the effective-model cluster prediction.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import structlog

from app.api.schemas.sweep import SweepResult
from app.core import analytic, dispersive
from app.core.errors import InvalidParameterError
from app.core.hamiltonians import (
    CouplingConvention,
    effective_coupling,
    effective_hamiltonian,
    frame_rotation,
    free_hamiltonian,
    rotating_frame_hamiltonian,
)
from app.core.hilbert import SpaceLayout, state_fidelity
from app.core.numkit import DenseVector, propagator
from app.core.params import BimodalParams, EffectiveParams

logger = structlog.get_logger(__name__)

AMPLITUDE_TOL = 1e-8
DISPERSIVE_TOL = 1e-10
VALIDITY_FLOOR = 0.98

DELTA_RANGE = (0.0, 3.0)
TIME_RANGE = (0.0, 10.0)
MAX_QUBITS = 4


@dataclass(frozen=True)
class OracleSettings:
    draws: int = 100
    seed: int = 0
    delta_over_omega: float = 20.0
    convention: CouplingConvention = "dispersive"


@dataclass(frozen=True)
class OracleReport:
    family: str
    metric: str
    value: float
    threshold: float
    passed: bool
    draws: int

    def as_row(self) -> dict:
        return {
            "family": self.family,
            "draws": self.draws,
            "metric": self.metric,
            "value": self.value,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class OracleFamily:
    name: str
    description: str
    metric: str
    threshold: float
    check: Callable[[OracleSettings, np.random.Generator], float]
    higher_is_better: bool = False

    def run(self, settings: OracleSettings) -> OracleReport:
        rng = np.random.default_rng(settings.seed)
        value = float(self.check(settings, rng))
        passed = value >= self.threshold if self.higher_is_better else value <= self.threshold
        logger.info(
            "oracle_family_checked", family=self.name, max_deviation=value, threshold=self.threshold, passed=passed
        )
        return OracleReport(self.name, self.metric, value, self.threshold, passed, settings.draws)


def _deviation(a: DenseVector, b: DenseVector) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _draw_delta(rng: np.random.Generator, Omega: float = 1.0) -> float:
    return float(rng.uniform(*DELTA_RANGE)) * Omega


def _draw_time(rng: np.random.Generator, rate: float = 1.0) -> float:
    return float(rng.uniform(*TIME_RANGE)) / rate


def _draw_sign(rng: np.random.Generator) -> int:
    return 1 if rng.integers(0, 2) else -1


# ---------------------------------------------------------------------------
# Resonant families
# ---------------------------------------------------------------------------


def check_single(settings: OracleSettings, rng: np.random.Generator) -> float:
    worst = 0.0
    layout = SpaceLayout.bimodal(1)
    start = analytic.SingleQubitAmplitudes(0, 0, 1).state(layout)
    for _ in range(settings.draws):
        Delta, t, s1 = _draw_delta(rng), _draw_time(rng), _draw_sign(rng)
        h = rotating_frame_hamiltonian(BimodalParams(Delta=Delta, signs=(s1,)), layout)
        closed = analytic.single_qubit_amplitudes(1.0, Delta, s1, t).state(layout)
        worst = max(worst, _deviation(closed, propagator(h, t) @ start))
    return worst


def check_sequential(settings: OracleSettings, rng: np.random.Generator) -> float:
    worst = 0.0
    layout = SpaceLayout.bimodal(2)
    start = analytic.SequentialAmplitudes(0, 0, 1, 0).state(layout)
    for _ in range(settings.draws):
        Delta = _draw_delta(rng)
        s1, s2 = _draw_sign(rng), _draw_sign(rng)
        t1, td, t2 = _draw_time(rng), _draw_time(rng), _draw_time(rng)
        p = BimodalParams(Delta=Delta, signs=(s1, s2))
        numeric = (
            propagator(rotating_frame_hamiltonian(p, layout, active=[2]), t2)
            @ propagator(free_hamiltonian(p, layout), td)
            @ propagator(rotating_frame_hamiltonian(p, layout, active=[1]), t1)
            @ start
        )
        closed = analytic.sequential_amplitudes(1.0, Delta, s1, s2, t1, td, t2)
        worst = max(worst, _deviation(closed.state(layout), numeric))
        if Delta > 1e-3:
            j = int(rng.integers(0, 4))
            parity = analytic.sequential_p_up_second(1.0, Delta, s1, s2, t1, analytic.delay_for_parity(Delta, j), t2)
            worst = max(worst, abs(parity - analytic.p_up_second(1.0, Delta, s1, s2, t1, t2, j)))
    return worst


def check_simultaneous(settings: OracleSettings, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(settings.draws):
        N = int(rng.integers(1, MAX_QUBITS + 1))
        Delta, t = _draw_delta(rng), _draw_time(rng)
        layout = SpaceLayout.bimodal(N)
        start = analytic.SimultaneousAmplitudes(0, 0, (1,) + (0,) * (N - 1), 0.0).state(layout)
        h = rotating_frame_hamiltonian(BimodalParams(Delta=Delta, signs=(1,) * N), layout)
        closed = analytic.simultaneous_vacuum_amplitudes(N, 1.0, Delta, t).state(layout)
        worst = max(worst, _deviation(closed, propagator(h, t) @ start))
    return worst


def check_bell_primed(settings: OracleSettings, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(settings.draws):
        N = int(rng.integers(1, MAX_QUBITS + 1))
        Delta, t = _draw_delta(rng), _draw_time(rng)
        prime = analytic.bell_prime_parameter(1.0, float(rng.uniform(0.0, math.sqrt(2))))
        layout = SpaceLayout.bimodal(N)
        a0, b0 = prime.modes_state
        start = analytic.SimultaneousAmplitudes(a0, b0, (0,) * N, 0.0).state(layout)
        h = rotating_frame_hamiltonian(BimodalParams(Delta=Delta, signs=(1,) * N), layout)
        closed = analytic.bell_primed_amplitudes(N, 1.0, Delta, prime.p, t).state(layout)
        worst = max(worst, _deviation(closed, propagator(h, t) @ start))
    return worst


# ---------------------------------------------------------------------------
# Dispersive families
# ---------------------------------------------------------------------------


def check_dispersive_w(settings: OracleSettings, rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(settings.draws):
        N = int(rng.integers(2, MAX_QUBITS + 1))
        t = _draw_time(rng)
        h = effective_hamiltonian(EffectiveParams(lam=1.0, signs=dispersive.w_signs(N)))
        start = dispersive.w_dispersive_amplitudes(N, 1.0, 0.0).state()
        closed = dispersive.w_dispersive_amplitudes(N, 1.0, t).state()
        worst = max(worst, _deviation(closed, propagator(h, t) @ start))
    return worst


def check_ghz(settings: OracleSettings, rng: np.random.Generator) -> float:
    h = effective_hamiltonian(EffectiveParams(lam=1.0, signs=dispersive.GHZ_SIGNS))
    start = dispersive.plus_state(3)
    times = [dispersive.ghz_time()] + [_draw_time(rng) for _ in range(settings.draws)]
    return max(_deviation(dispersive.ghz_evolution(1.0, t).state(), propagator(h, t) @ start) for t in times)


def check_cluster(settings: OracleSettings, rng: np.random.Generator) -> float:
    h = effective_hamiltonian(EffectiveParams(lam=1.0, signs=dispersive.CLUSTER_SIGNS))
    start = dispersive.cluster_initial_state()
    times = [dispersive.cluster_time()] + [_draw_time(rng) for _ in range(settings.draws)]
    return max(_deviation(dispersive.cluster_closed_form(1.0, t), propagator(h, t) @ start) for t in times)


def dispersive_validity(delta_over_omega: float, convention: CouplingConvention = "dispersive") -> float:
    """
    Fidelity between full bimodal propagation and the effective-model cluster state.

    Four qubits start in |up down up down> with vacuum modes; the full rotating-frame model runs for
    the cluster time of lambda = effective_coupling(Omega, Delta, convention) and the result is
    compared, in the interaction picture, with vacuum x the ideal cluster ket.
    """
    if delta_over_omega <= 0:
        raise InvalidParameterError(f"delta_over_omega must be positive, got {delta_over_omega}")
    Omega = 1.0
    Delta = delta_over_omega * Omega
    lam = effective_coupling(Omega, Delta, convention)
    t = dispersive.cluster_time(lam)
    layout = SpaceLayout.bimodal(4)
    vacuum = np.zeros(4, dtype=np.complex128)
    vacuum[0] = 1
    start = np.kron(vacuum, dispersive.cluster_initial_state())
    h = rotating_frame_hamiltonian(BimodalParams(Omega=Omega, Delta=Delta, signs=dispersive.CLUSTER_SIGNS), layout)
    full = frame_rotation(Delta, t, layout) @ propagator(h, t) @ start
    predicted = np.kron(vacuum, dispersive.cluster_evolution(1.0, dispersive.cluster_time(1.0)))
    value = state_fidelity(predicted, full)
    logger.debug("dispersive_validity_checked", delta_over_omega=delta_over_omega, convention=convention, fidelity=value)
    return value


def check_dispersive_validity(settings: OracleSettings, rng: np.random.Generator) -> float:
    return dispersive_validity(settings.delta_over_omega, settings.convention)


class OracleRegistry:
    def __init__(self, families: Sequence[OracleFamily]) -> None:
        self._families = {family.name: family for family in families}

    def names(self) -> list[str]:
        return list(self._families)

    def get(self, name: str) -> OracleFamily:
        family = self._families.get(name)
        if not family:
            raise InvalidParameterError(f"unknown oracle family {name!r}; known: {', '.join(self._families)}")
        return family

    def run(self, names: Sequence[str], settings: OracleSettings) -> list[OracleReport]:
        return [self.get(name).run(settings) for name in names]


ORACLE_FAMILIES: tuple[OracleFamily, ...] = (
    OracleFamily("single", "one qubit vs three-level propagator", "max_deviation", AMPLITUDE_TOL, check_single),
    OracleFamily("sequential", "two qubits in sequence with a free delay", "max_deviation", AMPLITUDE_TOL, check_sequential),
    OracleFamily("simultaneous", "N qubits at once, vacuum modes", "max_deviation", AMPLITUDE_TOL, check_simultaneous),
    OracleFamily("bell-primed", "N qubits at once, Bell-primed modes", "max_deviation", AMPLITUDE_TOL, check_bell_primed),
    OracleFamily("dispersive-w", "dispersive W dynamics vs H_eff", "max_deviation", DISPERSIVE_TOL, check_dispersive_w),
    OracleFamily("ghz", "dispersive GHZ dynamics vs H_eff", "max_deviation", DISPERSIVE_TOL, check_ghz),
    OracleFamily("cluster", "dispersive cluster dynamics vs H_eff", "max_deviation", DISPERSIVE_TOL, check_cluster),
    OracleFamily(
        "dispersive-validity",
        "full bimodal model vs effective cluster prediction",
        "fidelity",
        VALIDITY_FLOOR,
        check_dispersive_validity,
        higher_is_better=True,
    ),
)

_registry: Optional[OracleRegistry] = None


def get_oracle_registry() -> OracleRegistry:
    global _registry
    if _registry is None:
        _registry = OracleRegistry(ORACLE_FAMILIES)
    return _registry


def run_oracles(families: Sequence[str], settings: Optional[OracleSettings] = None) -> SweepResult:
    """
    Run the named families (``all`` expands to every family).

    Returns:
        SweepResult with columns (family, draws, metric, value, threshold, passed) and
        ``summary["passed"]`` true iff every family passed
    """
    settings = settings or OracleSettings()
    if settings.draws < 1:
        raise InvalidParameterError(f"draws must be >= 1, got {settings.draws}")
    registry = get_oracle_registry()
    names = registry.names() if list(families) == ["all"] else list(families)
    reports = registry.run(names, settings)
    return SweepResult(
        kind="oracle",
        columns=["family", "draws", "metric", "value", "threshold", "passed"],
        rows=[report.as_row() for report in reports],
        summary={"passed": all(report.passed for report in reports)},
        seed=settings.seed,
    )
