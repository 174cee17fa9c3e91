# File: backend/app/services/protocol_service.py
# Purpose: Catalog of named entanglement-generation protocols, targets and local-unitary canonicalizers
"""
Protocol catalog.

Every protocol is described by a ``ProtocolRecipe`` (name, scheme, description, builder). A
builder turns a ``ProtocolRequest`` into a ``ProtocolSpec`` holding the Hamiltonian parameters,
the ideal interaction time, the initial and generated states, the printed target and the local
unitary that maps the generated state onto that target.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Optional, Sequence, Union

import numpy as np
import structlog

from app.api.schemas.protocol import ProtocolRequest
from app.core import analytic, dispersive
from app.core.errors import InvalidParameterError, UnknownProtocolError
from app.core.hamiltonians import effective_hamiltonian, rotating_frame_hamiltonian
from app.core.hilbert import (
    SpaceLayout,
    Spin,
    mode_excitation_index,
    pauli,
    single_excitation_index,
    spin_state,
    state_fidelity,
)
from app.core.numkit import DenseMatrix, DenseVector, identity, kron_all, normalize, principal_sqrt
from app.core.params import BimodalParams, EffectiveParams

logger = structlog.get_logger(__name__)

Scheme = Literal["resonant-sequential", "resonant-simultaneous", "bell-primed", "dispersive"]

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


@dataclass(frozen=True)
class ProtocolSpec:
    name: str
    scheme: Scheme
    params: Union[BimodalParams, EffectiveParams]
    layout: SpaceLayout
    ideal_time: float
    initial_state: DenseVector
    generated: DenseVector
    target: DenseVector
    canonical_factors: tuple[DenseMatrix, ...]
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def canonicalizer(self) -> DenseMatrix:
        return kron_all(self.canonical_factors)

    @property
    def reference_state(self) -> DenseVector:
        """Target pulled back through the canonicalizer; equals the generated state up to global phase."""
        return self.canonicalizer.conj().T @ self.target

    @property
    def is_dispersive(self) -> bool:
        return self.scheme == "dispersive"

    def hamiltonian(self) -> DenseMatrix:
        if isinstance(self.params, EffectiveParams):
            return effective_hamiltonian(self.params)
        return rotating_frame_hamiltonian(self.params, self.layout)


@dataclass(frozen=True)
class ProtocolRecipe:
    name: str
    scheme: Scheme
    description: str
    build: Callable[[ProtocolRequest], ProtocolSpec]


class ProtocolRegistry:
    def __init__(self, recipes: Sequence[ProtocolRecipe]) -> None:
        self._recipes = {recipe.name: recipe for recipe in recipes}

    def names(self) -> list[str]:
        return list(self._recipes)

    def catalog(self) -> list[dict[str, str]]:
        return [
            {"name": r.name, "scheme": r.scheme, "description": r.description} for r in self._recipes.values()
        ]

    def get(self, name: str) -> ProtocolRecipe:
        recipe = self._recipes.get(name)
        if not recipe:
            raise UnknownProtocolError(f"unknown protocol {name!r}; known: {', '.join(self._recipes)}")
        return recipe

    def build(self, request: ProtocolRequest) -> ProtocolSpec:
        return self.get(request.name).build(request)


# ---------------------------------------------------------------------------
# Local unitaries
# ---------------------------------------------------------------------------


def fock_phase(phase: float, nmax: int) -> DenseMatrix:
    """exp(-i phase n) on one truncated mode."""
    return np.diag(np.exp(-1j * phase * np.arange(nmax + 1))).astype(np.complex128)


def qubit_phase(phase: float) -> DenseMatrix:
    """Removes ``phase`` from the up component."""
    return np.diag([np.exp(-1j * phase), 1.0]).astype(np.complex128)


def _phase_of(amplitude: complex) -> float:
    return float(np.angle(amplitude)) if abs(amplitude) > 1e-12 else 0.0


def ghz_factors() -> tuple[DenseMatrix, ...]:
    """V U with U = (-i sigma_x)^(1/2) x (i sigma_z)^(1/2) x (i sigma_z)^(1/2), V = -sqrt(i) sigma_z x H x H."""
    root_x = principal_sqrt(-1j * pauli("x"))
    root_z = principal_sqrt(1j * pauli("z"))
    first = -np.sqrt(1j) * pauli("z") @ root_x
    return first, HADAMARD @ root_z, HADAMARD @ root_z


def cluster_factors() -> tuple[DenseMatrix, ...]:
    """-sigma_x x 1 x sigma_x x 1."""
    return -pauli("x"), identity(2), pauli("x"), identity(2)


def sasa_factors() -> tuple[DenseMatrix, ...]:
    """T = -H sigma_x x 1 x sigma_x x H."""
    return -HADAMARD @ pauli("x"), identity(2), pauli("x"), HADAMARD


CANONICAL_FAMILIES: dict[str, Callable[[], tuple[DenseMatrix, ...]]] = {
    "ghz3": ghz_factors,
    "cluster4": cluster_factors,
    "sasa": sasa_factors,
}


def canonicalize(state: DenseVector, name: str) -> DenseVector:
    """Apply the named local-unitary product to a qubit-register state."""
    factory = CANONICAL_FAMILIES.get(name)
    if factory is None:
        raise InvalidParameterError(f"unknown canonicalizer {name!r}; known: {', '.join(CANONICAL_FAMILIES)}")
    operator = kron_all(factory())
    state = np.asarray(state, dtype=np.complex128)
    if state.shape != (operator.shape[0],):
        raise InvalidParameterError(f"{name} canonicalizer acts on dim {operator.shape[0]}, got state {state.shape}")
    return operator @ state


# ---------------------------------------------------------------------------
# Printed targets
# ---------------------------------------------------------------------------


def _bimodal_w(layout: SpaceLayout, mode_weight: float, qubit_weights: Sequence[float]) -> DenseVector:
    psi = np.zeros(layout.total_dim, dtype=np.complex128)
    psi[mode_excitation_index("A", layout)] = mode_weight
    psi[mode_excitation_index("B", layout)] = mode_weight
    for k, weight in enumerate(qubit_weights, start=1):
        psi[single_excitation_index(k, layout)] = weight
    return normalize(psi)


def _qubit_w(N: int, weights: Sequence[float]) -> DenseVector:
    layout = SpaceLayout.qubits(N)
    psi = np.zeros(layout.total_dim, dtype=np.complex128)
    for k, weight in enumerate(weights, start=1):
        psi[single_excitation_index(k, layout)] = weight
    return normalize(psi)


def _ket(spins: str) -> DenseVector:
    return spin_state([Spin.UP if c == "u" else Spin.DOWN for c in spins])


def target_state(name: str, N: Optional[int] = None, nmax: int = 1, p_up: Optional[float] = None) -> DenseVector:
    """
    Printed target states in the library basis (|up> = e0, mode A first).

    Args:
        name: Target name, e.g. ``bell-modes``, ``wt-hybrid``, ``ghz3``, ``cluster-phi4``
        N: Qubit count for the N-generic families
        nmax: Fock truncation for targets that include the modes
        p_up: Qubit-1 up probability for ``wN-dispersive``

    Returns:
        The normalized target ket
    """
    if name == "bell-modes":
        dim = nmax + 1
        psi = np.zeros(dim * dim, dtype=np.complex128)
        psi[1 * dim + 0] = 1 / math.sqrt(2)
        psi[0 * dim + 1] = 1 / math.sqrt(2)
        return psi
    if name == "w3-hybrid":
        return _bimodal_w(SpaceLayout.bimodal(1, nmax), 1.0, [1.0])
    if name == "wt-hybrid":
        return _bimodal_w(SpaceLayout.bimodal(1, nmax), 1.0, [math.sqrt(2)])
    if name in ("wN-hybrid", "w4-hybrid-vacuum"):
        count = _require_n(name, N if name == "wN-hybrid" else 2)
        return _bimodal_w(SpaceLayout.bimodal(count, nmax), 1.0, [1.0] * count)
    if name in ("wN-prototype", "w4-prototype-vacuum"):
        count = _require_n(name, N if name == "wN-prototype" else 4)
        return _bimodal_w(SpaceLayout.bimodal(count, nmax), 0.0, [1.0] * count)
    if name in ("w-dispersive", "wN-dispersive", "bell-dispersive"):
        count = _require_n(name, 2 if name == "bell-dispersive" else N, minimum=2)
        P1 = _dispersive_p_up(name, count, p_up)
        rest = math.sqrt((1 - P1) / (count - 1))
        return _qubit_w(count, [math.sqrt(P1)] + [rest] * (count - 1))
    if name == "ghz3":
        return (_ket("uuu") + _ket("ddd")) / math.sqrt(2)
    if name == "ghz3-generated":
        return dispersive.ghz_evolution(1.0, dispersive.ghz_time()).state()
    if name == "cluster4":
        return 0.5 * (_ket("uuuu") + _ket("uudd") + _ket("dduu") - _ket("dddd"))
    if name == "cluster4-generated":
        return 0.5 * (_ket("udud") - _ket("uddu") - _ket("duud") - _ket("dudu"))
    if name == "cluster-phi4":
        plus = np.array([1, 1], dtype=np.complex128) / math.sqrt(2)
        minus = np.array([1, -1], dtype=np.complex128) / math.sqrt(2)
        up = np.array([1, 0], dtype=np.complex128)
        down = np.array([0, 1], dtype=np.complex128)
        terms = [(plus, up, plus, up), (plus, up, minus, down), (minus, down, minus, up), (minus, down, plus, down)]
        return 0.5 * sum(kron_all(v.reshape(-1, 1) for v in term).reshape(-1) for term in terms)
    raise UnknownProtocolError(f"unknown target {name!r}")


def _require_n(name: str, N: Optional[int], minimum: int = 1) -> int:
    if N is None:
        raise InvalidParameterError(f"target {name!r} needs a qubit count")
    if N < minimum:
        raise InvalidParameterError(f"target {name!r} needs N >= {minimum}, got {N}")
    return N


def _dispersive_p_up(name: str, N: int, p_up: Optional[float]) -> float:
    if name == "w-dispersive":
        return 1 / N
    if name == "bell-dispersive":
        return 0.5
    return 0.5 if p_up is None else p_up


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _delta(request: ProtocolRequest, default_ratio: float) -> float:
    ratio = default_ratio if request.delta_over_omega is None else request.delta_over_omega
    return ratio * request.omega


def _resonant_factors(layout: SpaceLayout, amplitude_a: complex, amplitude_b: complex, qubit_amplitudes) -> tuple:
    factors = [fock_phase(_phase_of(amplitude_a), layout.nmax), fock_phase(_phase_of(amplitude_b), layout.nmax)]
    factors += [qubit_phase(_phase_of(c)) for c in qubit_amplitudes]
    return tuple(factors)


def _single_qubit_builder(name: str, P_up: float, description: str) -> ProtocolRecipe:
    def build(request: ProtocolRequest) -> ProtocolSpec:
        Omega = request.omega
        Delta = _delta(request, math.sqrt(2))
        params = BimodalParams(Omega=Omega, Delta=Delta, signs=(-1,), nmax=request.nmax)
        layout = SpaceLayout.bimodal(1, request.nmax)
        t = analytic.time_for_p_up(Omega, Delta, P_up)
        amps = analytic.single_qubit_amplitudes(Omega, Delta, -1, t)
        target = target_state(name, nmax=request.nmax)
        if name == "bell-modes":
            down = np.array([0, 1], dtype=np.complex128)
            target = np.kron(target, down)
        return ProtocolSpec(
            name=name,
            scheme="resonant-sequential",
            params=params,
            layout=layout,
            ideal_time=t,
            initial_state=analytic.SingleQubitAmplitudes(0, 0, 1).state(layout),
            generated=amps.state(layout),
            target=target,
            canonical_factors=_resonant_factors(layout, amps.c1, amps.c2, [amps.c3]),
            details={"P_up": P_up, "s1": -1},
        )

    return ProtocolRecipe(name=name, scheme="resonant-sequential", description=description, build=build)


def _vacuum_seeded_builder(name: str, N: int, description: str) -> ProtocolRecipe:
    def build(request: ProtocolRequest) -> ProtocolSpec:
        Omega = request.omega
        Delta = _delta(request, 0.0)
        params = BimodalParams(Omega=Omega, Delta=Delta, signs=(1,) * N, nmax=request.nmax)
        layout = SpaceLayout.bimodal(N, request.nmax)
        t = analytic.simultaneous_time_for_p_up(N, Omega, Delta, 0.25)
        amps = analytic.simultaneous_vacuum_amplitudes(N, Omega, Delta, t)
        initial = analytic.SimultaneousAmplitudes(0, 0, (1,) + (0,) * (N - 1), amps.Omega_tilde).state(layout)
        return ProtocolSpec(
            name=name,
            scheme="resonant-simultaneous",
            params=params,
            layout=layout,
            ideal_time=t,
            initial_state=initial,
            generated=amps.state(layout),
            target=target_state(name, nmax=request.nmax),
            canonical_factors=_resonant_factors(layout, amps.aN, amps.bN, amps.cN),
            details={"P_up": 0.25},
        )

    return ProtocolRecipe(name=name, scheme="resonant-simultaneous", description=description, build=build)


def _bell_primed_builder(name: str, kind: analytic.WKind, default_n: int, description: str) -> ProtocolRecipe:
    def build(request: ProtocolRequest) -> ProtocolSpec:
        N = request.n or default_n
        Omega = request.omega
        Delta0 = math.sqrt(2) * Omega if request.p_kind == "real" else 0.0
        prime = analytic.bell_prime_parameter(Omega, Delta0)
        if request.p_kind == "real":
            default_ratio = 0.0
        else:
            lower, upper = analytic.w_window(N, kind, "imaginary")
            default_ratio = 0.5 * (lower + upper)
        Delta = _delta(request, default_ratio)
        params = BimodalParams(Omega=Omega, Delta=Delta, signs=(1,) * N, nmax=request.nmax)
        layout = SpaceLayout.bimodal(N, request.nmax)
        t = analytic.time_for_w(N, kind, request.p_kind, Omega, Delta)
        amps = analytic.bell_primed_amplitudes(N, Omega, Delta, prime.p, t)
        a0, b0 = prime.modes_state
        initial = analytic.SimultaneousAmplitudes(a0, b0, (0,) * N, amps.Omega_tilde).state(layout)
        return ProtocolSpec(
            name=name,
            scheme="bell-primed",
            params=params,
            layout=layout,
            ideal_time=t,
            initial_state=initial,
            generated=amps.state(layout),
            target=target_state(name, N=N, nmax=request.nmax),
            canonical_factors=_resonant_factors(layout, amps.aN, amps.bN, amps.cN),
            details={"p": [prime.p.real, prime.p.imag], "Delta0": Delta0, "p_kind": request.p_kind},
        )

    return ProtocolRecipe(name=name, scheme="bell-primed", description=description, build=build)


def _dispersive_w_builder(name: str, default_n: int, description: str) -> ProtocolRecipe:
    def build(request: ProtocolRequest) -> ProtocolSpec:
        N = 2 if name == "bell-dispersive" else (request.n or default_n)
        if N < 2:
            raise InvalidParameterError(f"{name} needs N >= 2, got {N}")
        P1 = _dispersive_p_up(name, N, request.p_up)
        params = EffectiveParams(lam=request.lam, signs=dispersive.w_signs(N))
        layout = SpaceLayout.qubits(N)
        t = dispersive.w_dispersive_time(N, P1, request.lam)
        amps = dispersive.w_dispersive_amplitudes(N, request.lam, t)
        initial = dispersive.w_dispersive_amplitudes(N, request.lam, 0.0).state()
        factors = (qubit_phase(_phase_of(amps.c1)),) + (qubit_phase(_phase_of(amps.ck)),) * (N - 1)
        return ProtocolSpec(
            name=name,
            scheme="dispersive",
            params=params,
            layout=layout,
            ideal_time=t,
            initial_state=initial,
            generated=amps.state(),
            target=target_state(name, N=N, p_up=P1),
            canonical_factors=factors,
            details={"P_up": P1},
        )

    return ProtocolRecipe(name=name, scheme="dispersive", description=description, build=build)


def _build_ghz(request: ProtocolRequest) -> ProtocolSpec:
    t = dispersive.ghz_time(request.lam)
    return ProtocolSpec(
        name="ghz3",
        scheme="dispersive",
        params=EffectiveParams(lam=request.lam, signs=dispersive.GHZ_SIGNS),
        layout=SpaceLayout.qubits(3),
        ideal_time=t,
        initial_state=dispersive.plus_state(3),
        generated=dispersive.ghz_evolution(request.lam, t).state(),
        target=target_state("ghz3"),
        canonical_factors=ghz_factors(),
    )


def _build_cluster(request: ProtocolRequest) -> ProtocolSpec:
    t = dispersive.cluster_time(request.lam)
    return ProtocolSpec(
        name="cluster4",
        scheme="dispersive",
        params=EffectiveParams(lam=request.lam, signs=dispersive.CLUSTER_SIGNS),
        layout=SpaceLayout.qubits(4),
        ideal_time=t,
        initial_state=dispersive.cluster_initial_state(),
        generated=dispersive.cluster_evolution(request.lam, t),
        target=target_state("cluster4"),
        canonical_factors=cluster_factors(),
    )


def _default_recipes() -> list[ProtocolRecipe]:
    return [
        _single_qubit_builder("bell-modes", 0.0, "single qubit hands its excitation to the modes: cavity Bell state"),
        _single_qubit_builder("w3-hybrid", 1 / 3, "single qubit keeps P_up = 1/3: hybrid W3 of two modes and one qubit"),
        _single_qubit_builder("wt-hybrid", 1 / 2, "single qubit keeps P_up = 1/2: hybrid W_T for teleportation"),
        _vacuum_seeded_builder("w4-hybrid-vacuum", 2, "two qubits, one excited, vacuum modes: hybrid W4"),
        _vacuum_seeded_builder("w4-prototype-vacuum", 4, "four qubits, one excited, Delta = 0: prototype W4"),
        _bell_primed_builder("wN-hybrid", "hybrid", 3, "Bell-primed modes and N qubits: hybrid W_{N+2}"),
        _bell_primed_builder("wN-prototype", "prototype", 4, "Bell-primed modes and N qubits: prototype W_N"),
        _dispersive_w_builder("w-dispersive", 3, "dispersive W_N with equal populations"),
        _dispersive_w_builder("wN-dispersive", 3, "dispersive W_N with qubit-1 up probability p_up (default W_T)"),
        _dispersive_w_builder("bell-dispersive", 2, "dispersive two-qubit Bell state"),
        ProtocolRecipe("ghz3", "dispersive", "dispersive GHZ3 from |+++>, signs (-1, 1, 1)", _build_ghz),
        ProtocolRecipe("cluster4", "dispersive", "dispersive linear cluster from |up down up down>", _build_cluster),
    ]


_registry: Optional[ProtocolRegistry] = None


def get_registry() -> ProtocolRegistry:
    global _registry
    if _registry is None:
        _registry = ProtocolRegistry(_default_recipes())
    return _registry


def protocol_catalog() -> list[dict[str, str]]:
    return get_registry().catalog()


def build_protocol(request: Union[ProtocolRequest, str], **overrides) -> ProtocolSpec:
    if isinstance(request, str):
        request = ProtocolRequest(name=request, **overrides)
    return get_registry().build(request)


# ---------------------------------------------------------------------------
# Ideal runs
# ---------------------------------------------------------------------------


def _evolve_ideal(spec: ProtocolSpec) -> DenseVector:
    p = spec.params
    t = spec.ideal_time
    if spec.scheme == "resonant-sequential":
        return analytic.single_qubit_amplitudes(p.Omega, p.Delta, p.signs[0], t).state(spec.layout)
    if spec.scheme == "resonant-simultaneous":
        return analytic.simultaneous_vacuum_amplitudes(p.N, p.Omega, p.Delta, t).state(spec.layout)
    if spec.scheme == "bell-primed":
        prime = complex(*spec.details["p"])
        return analytic.bell_primed_amplitudes(p.N, p.Omega, p.Delta, prime, t).state(spec.layout)
    if spec.name == "ghz3":
        return dispersive.ghz_evolution(p.lam, t).state()
    if spec.name == "cluster4":
        return dispersive.cluster_evolution(p.lam, t)
    return dispersive.w_dispersive_amplitudes(p.N, p.lam, t).state()


def run_ideal(spec: ProtocolSpec) -> tuple[DenseVector, float]:
    """Noiseless protocol at its ideal time; fidelity to the target after canonicalization."""
    final = _evolve_ideal(spec)
    fidelity = state_fidelity(spec.target, spec.canonicalizer @ final)
    logger.info("protocol_run_completed", name=spec.name, fidelity=fidelity, ideal_time=spec.ideal_time)
    return final, fidelity
