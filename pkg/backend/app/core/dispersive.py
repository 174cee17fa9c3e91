# File: backend/app/core/dispersive.py
# Purpose: Closed-form dynamics of the dispersive effective model (W, GHZ, linear cluster)
import math
from dataclasses import dataclass

import numpy as np

from app.core.errors import InvalidParameterError
from app.core.hamiltonians import effective_hamiltonian
from app.core.hilbert import SpaceLayout, Spin, single_excitation_index, spin_state
from app.core.numkit import DenseVector, HermitianPropagator
from app.core.params import EffectiveParams

W_SIGNS_FIRST = -1
GHZ_SIGNS = (-1, 1, 1)
CLUSTER_SIGNS = (-1, -1, 1, 1)
CLUSTER_INITIAL = (Spin.UP, Spin.DOWN, Spin.UP, Spin.DOWN)


def w_signs(N: int) -> tuple[int, ...]:
    return (W_SIGNS_FIRST,) + (1,) * (N - 1)


def _check_lambda(lam: float) -> None:
    if lam <= 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")


@dataclass(frozen=True)
class DispersiveWAmplitudes:
    N: int
    c1: complex
    ck: complex

    def state(self) -> DenseVector:
        layout = SpaceLayout.qubits(self.N)
        psi = np.zeros(layout.total_dim, dtype=np.complex128)
        psi[single_excitation_index(1, layout)] = self.c1
        for k in range(2, self.N + 1):
            psi[single_excitation_index(k, layout)] = self.ck
        return psi


@dataclass(frozen=True)
class GhzAmplitudes:
    mu: float
    nu: float
    amplitudes: tuple[complex, ...]

    def state(self) -> DenseVector:
        return np.array(self.amplitudes, dtype=np.complex128)


def w_dispersive_amplitudes(N: int, lam: float, t: float) -> DispersiveWAmplitudes:
    """Qubit 1 up, qubits 2..N down, signs (-1, +1, ..., +1)."""
    if N < 2:
        raise InvalidParameterError(f"dispersive W needs N >= 2 qubits, got {N}")
    _check_lambda(lam)
    theta = 2 * math.sqrt(N - 1) * lam * t
    return DispersiveWAmplitudes(
        N=N, c1=complex(math.cos(theta)), ck=complex(0.0, math.sin(theta) / math.sqrt(N - 1))
    )


def w_dispersive_time(N: int, P1: float, lam: float = 1.0) -> float:
    """Shortest time leaving qubit 1 with up probability P1."""
    if N < 2:
        raise InvalidParameterError(f"dispersive W needs N >= 2 qubits, got {N}")
    if not 0 <= P1 <= 1:
        raise InvalidParameterError(f"P1 must lie in [0, 1], got {P1}")
    _check_lambda(lam)
    return math.acos(math.sqrt(P1)) / (2 * math.sqrt(N - 1) * lam)


def w_dispersive_target(N: int, P1: float) -> DenseVector:
    """sqrt(P1) |up down..> + i sqrt((1 - P1)/(N - 1)) sum_k sigma_plus_k |down..>."""
    t = w_dispersive_time(N, P1)
    return w_dispersive_amplitudes(N, 1.0, t).state()


def ghz_evolution(lam: float, t: float) -> GhzAmplitudes:
    """Evolution of |+++> under the three-qubit effective Hamiltonian with signs (-1, 1, 1)."""
    _check_lambda(lam)
    angle = 2 * math.sqrt(2) * lam * t
    mu = math.cos(angle)
    nu = math.sin(angle) / math.sqrt(2)
    single = complex(mu, nu)
    double = complex(mu, 2 * nu)
    # basis order |uuu>, |uud>, |udu>, |udd>, |duu>, |dud>, |ddu>, |ddd>
    raw = (1, single, single, double, double, single, single, 1)
    scale = 1 / (2 * math.sqrt(2))
    return GhzAmplitudes(mu=mu, nu=nu, amplitudes=tuple(complex(x) * scale for x in raw))


def ghz_time(lam: float = 1.0) -> float:
    _check_lambda(lam)
    return math.pi / (2 * math.sqrt(2) * lam)


def plus_state(N: int) -> DenseVector:
    return np.full(2**N, 2 ** (-N / 2), dtype=np.complex128)


def cluster_time(lam: float = 1.0) -> float:
    _check_lambda(lam)
    return math.pi / (4 * math.sqrt(2) * lam)


def cluster_initial_state() -> DenseVector:
    return spin_state(CLUSTER_INITIAL)


def cluster_evolution(lam: float, t: float) -> DenseVector:
    """exp(-i H_eff t)|up down up down> with signs (-1, -1, +1, +1)."""
    _check_lambda(lam)
    h = effective_hamiltonian(EffectiveParams(lam=lam, signs=CLUSTER_SIGNS))
    return HermitianPropagator(h).apply(cluster_initial_state(), t)


def cluster_closed_form(lam: float, t: float) -> DenseVector:
    """
    Same dynamics from the two-dimensional invariant subspace.

    With M the uniform superposition of the four cross-group pairs and P = (|1,2> + |3,4>)/sqrt(2),
    the coupling acts as 2 sqrt(2) sigma_x on {M, P}; the rest of |1,3> is stationary.
    """
    _check_lambda(lam)
    layout = SpaceLayout.qubits(4)

    def pair(j: int, k: int) -> DenseVector:
        spins = [Spin.UP if q in (j, k) else Spin.DOWN for q in range(1, 5)]
        return spin_state(spins)

    mixed = 0.5 * (pair(1, 3) + pair(1, 4) + pair(2, 3) + pair(2, 4))
    paired = (pair(1, 2) + pair(3, 4)) / math.sqrt(2)
    resting = pair(1, 3) - 0.5 * mixed
    theta = 4 * math.sqrt(2) * lam * t
    psi = resting + 0.5 * (math.cos(theta) * mixed + 1j * math.sin(theta) * paired)
    return psi.reshape(layout.total_dim)


def bell_dispersive_time(lam: float = 1.0) -> float:
    """Two-qubit W protocol with P1 = 1/2: lambda t = pi/8."""
    return w_dispersive_time(2, 0.5, lam)
