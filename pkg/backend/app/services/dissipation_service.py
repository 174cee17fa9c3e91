# File: backend/app/services/dissipation_service.py
# Purpose: Lindblad dynamics with local zero-temperature reservoirs and fidelity-vs-decay sweeps
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import structlog

from app.api.schemas.sweep import SweepResult
from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hilbert import SpaceLayout, fidelity, mode_operator, qubit_operator
from app.core.numkit import (
    DenseMatrix,
    Superoperator,
    converge_by_halving,
    dagger,
    evolve_density,
    evolve_density_exact,
    liouvillian_matrix,
    outer,
)
from app.core.params import DecayRates
from app.infrastructure.tasks.pool import ordered_map
from app.services.protocol_service import ProtocolSpec
from app.utils.validation import GridValidator

logger = structlog.get_logger(__name__)

Method = Literal["exact", "rk4"]


@dataclass(frozen=True)
class DissipationScenario:
    """Rates (kappaA, kappaB, gamma) = (chi/mA, chi/mB, chi/mG)."""

    name: str
    mA: float
    mB: float
    mG: float
    description: str = ""

    def __post_init__(self):
        if min(self.mA, self.mB, self.mG) <= 0:
            raise InvalidParameterError(f"scenario multipliers must be positive, got {(self.mA, self.mB, self.mG)}")

    def rates(self, chi: float) -> DecayRates:
        return DecayRates(kappaA=chi / self.mA, kappaB=chi / self.mB, gamma=chi / self.mG)


SCENARIOS: tuple[DissipationScenario, ...] = (
    DissipationScenario("equal", 1, 1, 1, "kappaA = kappaB = gamma = chi"),
    DissipationScenario("cavity-weak", 10, 10, 1, "kappaA = kappaB = chi/10, gamma = chi"),
    DissipationScenario("atom-weak", 1, 1, 10, "kappaA = kappaB = chi, gamma = chi/10"),
    DissipationScenario("mixed-a", 10, 2, 1, "kappaA = chi/10, kappaB = chi/2, gamma = chi"),
    DissipationScenario("mixed-a-mirror", 2, 10, 1, "kappaA = chi/2, kappaB = chi/10, gamma = chi"),
    DissipationScenario("mixed-b", 1, 2, 10, "kappaA = chi, kappaB = chi/2, gamma = chi/10"),
    DissipationScenario("mixed-b-mirror", 2, 1, 10, "kappaA = chi/2, kappaB = chi, gamma = chi/10"),
)


def scenario_by_name(name: str) -> DissipationScenario:
    for scenario in SCENARIOS:
        if scenario.name == name:
            return scenario
    raise InvalidParameterError(f"unknown scenario {name!r}; known: {', '.join(s.name for s in SCENARIOS)}")


def lindblad_channels(rates: DecayRates, layout: SpaceLayout) -> list[DenseMatrix]:
    """sqrt(kappaA) a, sqrt(kappaB) b and sqrt(gamma) sigma_minus_k; zero-rate channels are omitted."""
    channels = []
    if layout.has_modes:
        if rates.kappaA > 0:
            channels.append(math.sqrt(rates.kappaA) * mode_operator("A", layout))
        if rates.kappaB > 0:
            channels.append(math.sqrt(rates.kappaB) * mode_operator("B", layout))
    if rates.gamma > 0:
        for k in range(1, layout.n_qubits + 1):
            channels.append(math.sqrt(rates.gamma) * qubit_operator("minus", k, layout))
    return channels


def lindblad_generator(h: DenseMatrix, rates: DecayRates, layout: SpaceLayout) -> Superoperator:
    """rho -> -i[H, rho] + sum_c (c rho c^dag - {c^dag c, rho} / 2)."""
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (layout.total_dim, layout.total_dim):
        raise DimensionMismatchError(f"Hamiltonian shape {h.shape} does not match layout dim {layout.total_dim}")
    channels = lindblad_channels(rates, layout)
    damping = sum((dagger(c) @ c for c in channels), np.zeros_like(h))
    jumps = [(c, dagger(c)) for c in channels]

    def apply(rho: DenseMatrix) -> DenseMatrix:
        out = -1j * (h @ rho - rho @ h) - 0.5 * (damping @ rho + rho @ damping)
        for c, c_dag in jumps:
            out = out + c @ rho @ c_dag
        return out

    return apply


def _effective_rates(spec: ProtocolSpec, rates: DecayRates) -> DecayRates:
    # cavity channels are dropped for dispersive protocols: the modes stay in vacuum
    if spec.is_dispersive:
        return DecayRates(gamma=rates.gamma)
    return rates


def evolve_protocol(spec: ProtocolSpec, rates: DecayRates, method: Method = "exact") -> DenseMatrix:
    """Density matrix after the protocol's ideal time under the master equation."""
    rates = _effective_rates(spec, rates)
    h = spec.hamiltonian()
    rho0 = outer(spec.initial_state)
    if method == "exact":
        lmat = liouvillian_matrix(h, lindblad_channels(rates, spec.layout))
        return evolve_density_exact(lmat, rho0, spec.ideal_time)
    if method == "rk4":
        generator = lindblad_generator(h, rates, spec.layout)
        return converge_by_halving(lambda steps: evolve_density(generator, rho0, spec.ideal_time, spec.ideal_time / steps))
    raise InvalidParameterError(f"unknown integration method {method!r}")


def dissipative_fidelity(spec: ProtocolSpec, rates: DecayRates, method: Method = "exact") -> float:
    """Fidelity of the dissipative final state with the ideal generated state."""
    rho = evolve_protocol(spec, rates, method)
    return fidelity(spec.reference_state, rho)


def chi_sweep(
    spec: ProtocolSpec,
    scenario: DissipationScenario,
    chi_grid: Sequence[float],
    method: Method = "exact",
    max_workers: int = 1,
) -> SweepResult:
    """
    Fidelity at each chi of the grid.

    Args:
        spec: Protocol to evolve
        scenario: Rate configuration; only its gamma share applies to dispersive protocols
        chi_grid: Strictly increasing, non-negative rates in units of Omega (or lambda)
        method: ``exact`` Liouvillian exponential or ``rk4`` integration refined by step halving
        max_workers: Threads used for independent grid points

    Returns:
        SweepResult with columns (chi_over_unit, scenario, protocol, fidelity)
    """
    grid = GridValidator.validate(chi_grid, "chi grid")

    def point(chi: float) -> float:
        value = dissipative_fidelity(spec, scenario.rates(chi), method)
        logger.debug("sweep_point_completed", kind="dissipation", protocol=spec.name, chi=chi, value=value)
        return value

    values = ordered_map(point, grid, max_workers)
    rows = [
        {"chi_over_unit": chi, "scenario": scenario.name, "protocol": spec.name, "fidelity": value}
        for chi, value in zip(grid, values)
    ]
    return SweepResult(
        kind="dissipation",
        columns=["chi_over_unit", "scenario", "protocol", "fidelity"],
        rows=rows,
    )
