# File: backend/app/core/hamiltonians.py
# Purpose: Rotating-frame, interaction-picture and dispersive effective Hamiltonians
"""
Hamiltonian builders for the bimodal cavity model.

With ``V_A = sum_k a^dag sigma_minus_k`` and ``V_B = sum_k s_k b^dag sigma_minus_k``:

- rotating frame:      H = Delta (a^dag a - b^dag b) + Omega (V_A + V_A^dag + V_B + V_B^dag)
- interaction picture: H_I(t) = Omega (V_A e^{i Delta t} + V_B e^{-i Delta t} + h.c.)
- dispersive:          H_eff = -lambda (n_A - n_B) sum_k sigma_z_k
                               - lambda sum_{j != k} (1 - s_j s_k) sigma_plus_j sigma_minus_k
"""
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Optional

import numpy as np

from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.hilbert import SpaceLayout, embed, mode_operator, number_operator, qubit_operator
from app.core.numkit import DenseMatrix, dagger
from app.core.params import BimodalParams, EffectiveParams

CouplingConvention = Literal["dispersive", "literal"]


@dataclass(frozen=True)
class CouplingPieces:
    """Time-independent building blocks shared by the rotating-frame and interaction-picture forms."""

    free: DenseMatrix
    v_a: DenseMatrix
    v_b: DenseMatrix
    Omega: float
    Delta: float

    def rotating(self) -> DenseMatrix:
        coupling = self.v_a + dagger(self.v_a) + self.v_b + dagger(self.v_b)
        return self.free + self.Omega * coupling

    def interaction(self, t: float) -> DenseMatrix:
        forward = self.v_a * np.exp(1j * self.Delta * t) + self.v_b * np.exp(-1j * self.Delta * t)
        return self.Omega * (forward + dagger(forward))


def _check_layout(p: BimodalParams, layout: SpaceLayout) -> None:
    if not layout.has_modes:
        raise DimensionMismatchError("bimodal Hamiltonians need a layout with modes")
    if layout.n_qubits != p.N:
        raise DimensionMismatchError(f"layout has {layout.n_qubits} qubits, params have {p.N} signs")
    if layout.nmax != p.nmax:
        raise DimensionMismatchError(f"layout nmax {layout.nmax} differs from params nmax {p.nmax}")


def coupling_pieces(
    p: BimodalParams,
    layout: SpaceLayout,
    active: Optional[Iterable[int]] = None,
) -> CouplingPieces:
    """
    Build the free term and the two collective couplings.

    Args:
        p: Model parameters
        layout: Bimodal layout matching ``p``
        active: 1-based qubits coupled to the modes (default: all)

    Returns:
        CouplingPieces for the requested qubits
    """
    _check_layout(p, layout)
    qubits = list(range(1, p.N + 1)) if active is None else sorted(set(active))
    if any(not 1 <= k <= p.N for k in qubits):
        raise InvalidParameterError(f"active qubits {qubits} out of range 1..{p.N}")

    a = mode_operator("A", layout)
    b = mode_operator("B", layout)
    n_a = embed(number_operator(layout.nmax), layout.factor_index("A"), layout)
    n_b = embed(number_operator(layout.nmax), layout.factor_index("B"), layout)

    dim = layout.total_dim
    v_a = np.zeros((dim, dim), dtype=np.complex128)
    v_b = np.zeros((dim, dim), dtype=np.complex128)
    for k in qubits:
        lower = qubit_operator("minus", k, layout)
        v_a += dagger(a) @ lower
        v_b += p.signs[k - 1] * (dagger(b) @ lower)

    return CouplingPieces(free=p.Delta * (n_a - n_b), v_a=v_a, v_b=v_b, Omega=p.Omega, Delta=p.Delta)


def rotating_frame_hamiltonian(
    p: BimodalParams,
    layout: SpaceLayout,
    active: Optional[Iterable[int]] = None,
) -> DenseMatrix:
    return coupling_pieces(p, layout, active).rotating()


def interaction_hamiltonian(
    p: BimodalParams,
    layout: SpaceLayout,
    active: Optional[Iterable[int]] = None,
) -> Callable[[float], DenseMatrix]:
    """Evaluator t -> H_I(t); the couplings are assembled once."""
    return coupling_pieces(p, layout, active).interaction


def free_hamiltonian(p: BimodalParams, layout: SpaceLayout) -> DenseMatrix:
    """Delta (a^dag a - b^dag b): rotating-frame evolution while no qubit is coupled."""
    return coupling_pieces(p, layout, active=()).free


def frame_rotation(Delta: float, t: float, layout: SpaceLayout) -> DenseMatrix:
    """R(t) = exp(i Delta t (a^dag a - b^dag b)) mapping rotating-frame kets to the interaction picture."""
    number = np.arange(layout.nmax + 1)
    phase_a = np.exp(1j * Delta * t * number)
    phase_b = np.exp(-1j * Delta * t * number)
    return embed(np.diag(phase_a), layout.factor_index("A"), layout) @ embed(
        np.diag(phase_b), layout.factor_index("B"), layout
    )


def effective_coupling(Omega: float, Delta: float, convention: CouplingConvention = "dispersive") -> float:
    """
    Effective qubit-qubit coupling of the dispersive regime.

    ``dispersive`` gives Omega^2 / Delta, the value produced by second-order elimination of the
    modes. ``literal`` gives Delta^2 / Omega and exists only to show that it fails validation.
    """
    if Omega <= 0:
        raise InvalidParameterError(f"Omega must be positive, got {Omega}")
    if Delta <= 0:
        raise InvalidParameterError(f"Delta must be positive in the dispersive regime, got {Delta}")
    if convention == "dispersive":
        return Omega**2 / Delta
    if convention == "literal":
        return Delta**2 / Omega
    raise InvalidParameterError(f"unknown coupling convention {convention!r}")


def effective_hamiltonian(
    p: EffectiveParams,
    nA: int = 0,
    nB: int = 0,
    present: Optional[Iterable[int]] = None,
) -> DenseMatrix:
    """
    H_eff on the qubit-only space for fixed photon numbers.

    Args:
        p: Effective parameters
        nA: Photon number of mode A
        nB: Photon number of mode B
        present: 1-based qubits currently inside the cavity (default: all)
    """
    if nA < 0 or nB < 0:
        raise InvalidParameterError(f"photon numbers must be >= 0, got nA={nA}, nB={nB}")
    layout = SpaceLayout.qubits(p.N)
    inside = list(range(1, p.N + 1)) if present is None else sorted(set(present))
    if any(not 1 <= k <= p.N for k in inside):
        raise InvalidParameterError(f"present qubits {inside} out of range 1..{p.N}")

    dim = layout.total_dim
    h = np.zeros((dim, dim), dtype=np.complex128)
    if nA != nB:
        for k in inside:
            h += -p.lam * (nA - nB) * qubit_operator("z", k, layout)
    for j in inside:
        raise_j = qubit_operator("plus", j, layout)
        for k in inside:
            weight = 1 - p.signs[j - 1] * p.signs[k - 1]
            if j == k or weight == 0:
                continue
            h += -p.lam * weight * (raise_j @ qubit_operator("minus", k, layout))
    return h
