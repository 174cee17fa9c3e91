# File: backend/app/services/jitter_service.py
# Purpose: Time-of-flight jitter Monte Carlo for the dispersive protocols, with optional qubit decay
"""
Jittered arrivals.

Qubit k enters the cavity at delta_k (normal, mean 0, std sigma/lambda) instead of 0. While
inside it couples to the other present qubits through H_eff restricted to the present set; the
evolution is piecewise constant between entry and exit times. Qubit decay acts on every qubit
over the whole simulated window.

Two transit models are supported:

- ``fixed``: every qubit keeps the designed duration t*, so it leaves at delta_k + t*; the run
  stops at the last exit.
- ``common-stop``: every qubit leaves at the designed stop time t*; late arrivals interact for
  less time and a qubit arriving after t* never interacts.
"""
import math
import threading
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence, Union

import numpy as np
import structlog

from app.api.schemas.sweep import SweepResult
from app.core.errors import InvalidParameterError
from app.core.hamiltonians import effective_hamiltonian
from app.core.hilbert import fidelity, qubit_operator, state_fidelity
from app.core.numkit import (
    DenseMatrix,
    DenseVector,
    HermitianPropagator,
    LiouvillePropagator,
    liouvillian_matrix,
    outer,
)
from app.core.params import EffectiveParams, JitterConfig
from app.infrastructure.tasks.pool import ordered_map
from app.services.protocol_service import ProtocolSpec
from app.utils.validation import GridValidator

logger = structlog.get_logger(__name__)

Transit = Literal["fixed", "common-stop"]
FinalState = Union[DenseVector, DenseMatrix]


@dataclass(frozen=True)
class EntrySchedule:
    """Entry offsets of each qubit relative to the designed start, and the designed duration."""

    deltas: tuple[float, ...]
    transit: float
    mode: Transit = "fixed"

    @property
    def entries(self) -> tuple[float, ...]:
        return self.deltas

    @property
    def exits(self) -> tuple[float, ...]:
        if self.mode == "fixed":
            return tuple(d + self.transit for d in self.deltas)
        return tuple(max(d, self.transit) for d in self.deltas)

    @property
    def window(self) -> tuple[float, float]:
        if self.mode == "fixed":
            return min(self.entries), max(self.exits)
        return min(min(self.entries), self.transit), self.transit

    def intervals(self) -> list[tuple[float, frozenset[int]]]:
        """
        Piecewise-constant segments covering the window.

        Returns:
            (duration, present 1-based qubits) per segment, in time order
        """
        start, stop = self.window
        points = sorted({start, stop, *(t for t in self.entries + self.exits if start < t < stop)})
        segments = []
        for a, b in zip(points, points[1:]):
            if b <= a:
                continue
            middle = 0.5 * (a + b)
            present = frozenset(
                k for k, (enter, leave) in enumerate(zip(self.entries, self.exits), start=1) if enter <= middle < leave
            )
            segments.append((b - a, present))
        return segments


def standard_deviates(seed: int, sample_index: int, count: int) -> np.ndarray:
    """
    ``count`` standard normal deviates from a Philox stream keyed by (seed, sample_index).

    The same key always yields the same deviates, independent of how samples are scheduled.
    """
    key = np.array([seed, sample_index], dtype=np.uint64)
    generator = np.random.Generator(np.random.Philox(key=key))
    return generator.standard_normal(count)


def sample_entry_times(
    cfg: JitterConfig,
    N: int,
    sample_index: int,
    transit: float = 0.0,
    lam: float = 1.0,
) -> EntrySchedule:
    """
    Draw one schedule: delta_k = (sigma_fraction / lambda) z_k with z_k standard normal.

    Args:
        cfg: Jitter settings (sigma as a fraction of 1/lambda, seed, transit model)
        N: Number of qubits
        sample_index: Monte Carlo sample number, part of the stream key
        transit: Designed interaction duration t*
        lam: Effective coupling

    Returns:
        The sampled EntrySchedule
    """
    if N < 1:
        raise InvalidParameterError(f"need at least one qubit, got {N}")
    if sample_index < 0:
        raise InvalidParameterError(f"sample index must be >= 0, got {sample_index}")
    scale = cfg.sigma_fraction / lam
    if scale == 0:
        deltas = (0.0,) * N
    else:
        deltas = tuple(float(scale * z) for z in standard_deviates(cfg.seed, sample_index, N))
    return EntrySchedule(deltas=deltas, transit=transit, mode=cfg.transit)


class JitterSimulator:
    """
    Piecewise evolution of one dispersive protocol under a given qubit decay rate.

    Propagators are cached per present-qubit set, so a Monte Carlo run pays for at most 2^N
    eigendecompositions. Without decay the state stays a ket.
    """

    def __init__(self, spec: ProtocolSpec, gamma: float = 0.0) -> None:
        if not spec.is_dispersive or not isinstance(spec.params, EffectiveParams):
            raise InvalidParameterError(f"jitter applies to dispersive protocols only, got {spec.name!r}")
        if gamma < 0:
            raise InvalidParameterError(f"gamma must be >= 0, got {gamma}")
        self.spec = spec
        self.gamma = gamma
        self._channels = [
            math.sqrt(gamma) * qubit_operator("minus", k, spec.layout) for k in range(1, spec.layout.n_qubits + 1)
        ] if gamma > 0 else []
        self._cache: dict[frozenset[int], Union[HermitianPropagator, LiouvillePropagator]] = {}
        self._lock = threading.Lock()

    @property
    def is_pure(self) -> bool:
        return self.gamma == 0

    def _propagator(self, present: frozenset[int]):
        with self._lock:
            cached = self._cache.get(present)
        if cached is not None:
            return cached
        h = effective_hamiltonian(self.spec.params, present=present)
        if self.is_pure:
            built = HermitianPropagator(h)
        else:
            built = LiouvillePropagator(liouvillian_matrix(h, self._channels))
        with self._lock:
            return self._cache.setdefault(present, built)

    def final_state(self, schedule: EntrySchedule) -> FinalState:
        """Ket (no decay) or density matrix at the end of the schedule's window."""
        if len(schedule.deltas) != self.spec.layout.n_qubits:
            raise InvalidParameterError(
                f"schedule has {len(schedule.deltas)} qubits, protocol {self.spec.name!r} has {self.spec.layout.n_qubits}"
            )
        state = self.spec.initial_state if self.is_pure else outer(self.spec.initial_state)
        for duration, present in schedule.intervals():
            state = self._propagator(present).apply(state, duration)
        return state

    def fidelity(self, schedule: EntrySchedule) -> float:
        state = self.final_state(schedule)
        if self.is_pure:
            return state_fidelity(self.spec.reference_state, state)
        return fidelity(self.spec.reference_state, state)


def evolve_with_jitter(spec: ProtocolSpec, schedule: EntrySchedule, gamma: float = 0.0) -> DenseMatrix:
    """Density matrix at the last exit of ``schedule``."""
    state = JitterSimulator(spec, gamma).final_state(schedule)
    return outer(state) if state.ndim == 1 else state


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    reps: int


def summarize(values: Sequence[float]) -> MonteCarloEstimate:
    """Mean via compensated summation and the standard error of the mean."""
    reps = len(values)
    mean = math.fsum(values) / reps
    if reps < 2:
        return MonteCarloEstimate(mean, 0.0, reps)
    variance = math.fsum((v - mean) ** 2 for v in values) / (reps - 1)
    return MonteCarloEstimate(mean, math.sqrt(variance / reps), reps)


def monte_carlo(
    simulator: JitterSimulator,
    cfg: JitterConfig,
    measure: Optional[Callable[[FinalState], float]] = None,
    max_workers: int = 1,
) -> MonteCarloEstimate:
    """
    Average ``measure`` (default: fidelity to the generated state) over cfg.reps schedules.

    At zero jitter every schedule is identical, so the single evaluation is replicated.
    """
    spec = simulator.spec

    def one(index: int) -> float:
        schedule = sample_entry_times(cfg, spec.layout.n_qubits, index, spec.ideal_time, spec.params.lam)
        if measure is None:
            return simulator.fidelity(schedule)
        return measure(simulator.final_state(schedule))

    if cfg.sigma_fraction == 0:
        return summarize([one(0)] * cfg.reps)
    return summarize(ordered_map(one, range(cfg.reps), max_workers))


def jitter_sweep(
    spec: ProtocolSpec,
    sigma_pcts: Sequence[float],
    cfg: JitterConfig,
    gamma: float = 0.0,
    max_workers: int = 1,
) -> SweepResult:
    """
    Mean fidelity and standard error per jitter level.

    Args:
        spec: Dispersive protocol
        sigma_pcts: Jitter standard deviations in percent of 1/lambda
        cfg: reps, seed and transit model; its sigma_fraction is ignored
        gamma: Qubit decay rate in units of lambda
        max_workers: Threads used for Monte Carlo samples

    Returns:
        SweepResult with columns (sigma_pct, protocol, mean_fidelity, stderr, reps, seed)
    """
    grid = GridValidator.validate(sigma_pcts, "sigma grid")
    simulator = JitterSimulator(spec, gamma)
    rows = []
    for index, pct in enumerate(grid):
        point_cfg = cfg.model_copy(update={"sigma_fraction": pct / 100.0})
        estimate = monte_carlo(simulator, point_cfg, max_workers=max_workers)
        logger.debug(
            "sweep_point_completed", kind="jitter", protocol=spec.name, index=index, value=estimate.mean
        )
        rows.append(
            {
                "sigma_pct": pct,
                "protocol": spec.name,
                "mean_fidelity": estimate.mean,
                "stderr": estimate.stderr,
                "reps": cfg.reps,
                "seed": cfg.seed,
            }
        )
    return SweepResult(
        kind="jitter",
        columns=["sigma_pct", "protocol", "mean_fidelity", "stderr", "reps", "seed"],
        rows=rows,
        seed=cfg.seed,
    )
