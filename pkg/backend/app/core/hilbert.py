# File: backend/app/core/hilbert.py
# Purpose: Truncated tensor-product spaces of two bosonic modes and N qubits
"""
Hilbert-space bookkeeping.

Factor order is fixed: mode A, mode B, then qubits 1..N. Basis kets are enumerated in
mixed radix with the first factor most significant. Qubit convention: ``|up> = e0``,
``|down> = e1``, so ``sigma_z = diag(1, -1)`` and ``sigma_plus = [[0, 1], [0, 0]]``.
"""
import string
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from app.core.errors import DimensionMismatchError, InvalidParameterError
from app.core.numkit import DenseMatrix, DenseVector, as_matrix, dagger, identity, kron_all, outer, purity

PauliKind = Literal["x", "y", "z", "plus", "minus"]

UP_GLYPH = "↑"
DOWN_GLYPH = "↓"


class Spin(IntEnum):
    UP = 0
    DOWN = 1


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered factors of a product space; ``nmax`` is None for qubit-only layouts."""

    nmax: Optional[int]
    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 0:
            raise InvalidParameterError(f"n_qubits must be >= 0, got {self.n_qubits}")
        if self.nmax is not None and self.nmax < 1:
            raise InvalidParameterError(f"nmax must be >= 1, got {self.nmax}")
        if self.nmax is None and self.n_qubits == 0:
            raise InvalidParameterError("a layout needs at least one factor")

    @classmethod
    def bimodal(cls, n_qubits: int, nmax: int = 1) -> "SpaceLayout":
        return cls(nmax=nmax, n_qubits=n_qubits)

    @classmethod
    def qubits(cls, n_qubits: int) -> "SpaceLayout":
        return cls(nmax=None, n_qubits=n_qubits)

    @property
    def has_modes(self) -> bool:
        return self.nmax is not None

    @property
    def factors(self) -> tuple[str, ...]:
        modes = ("A", "B") if self.has_modes else ()
        return modes + tuple(f"q{k}" for k in range(1, self.n_qubits + 1))

    @property
    def dims(self) -> tuple[int, ...]:
        modes = (self.nmax + 1, self.nmax + 1) if self.has_modes else ()
        return modes + (2,) * self.n_qubits

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def factor_index(self, name: str) -> int:
        try:
            return self.factors.index(name)
        except ValueError:
            raise InvalidParameterError(f"layout has no factor {name!r}; factors are {self.factors}") from None

    def qubit_factor(self, k: int) -> int:
        """Factor index of qubit k (1-based)."""
        if not 1 <= k <= self.n_qubits:
            raise InvalidParameterError(f"qubit index {k} out of range 1..{self.n_qubits}")
        return (2 if self.has_modes else 0) + k - 1


@dataclass(frozen=True)
class BasisLabel:
    nA: int
    nB: int
    spins: tuple[Spin, ...]


def annihilation(nmax: int) -> DenseMatrix:
    """Truncated bosonic a with <n-1|a|n> = sqrt(n)."""
    if nmax < 1:
        raise InvalidParameterError(f"nmax must be >= 1, got {nmax}")
    return np.diag(np.sqrt(np.arange(1, nmax + 1)), k=1).astype(np.complex128)


def number_operator(nmax: int) -> DenseMatrix:
    return np.diag(np.arange(nmax + 1)).astype(np.complex128)


_PAULI = {
    "x": [[0, 1], [1, 0]],
    "y": [[0, -1j], [1j, 0]],
    "z": [[1, 0], [0, -1]],
    "plus": [[0, 1], [0, 0]],
    "minus": [[0, 0], [1, 0]],
}


def pauli(kind: PauliKind) -> DenseMatrix:
    try:
        return as_matrix(_PAULI[kind])
    except KeyError:
        raise InvalidParameterError(f"unknown Pauli kind {kind!r}") from None


def embed(op: DenseMatrix, factor_index: int, layout: SpaceLayout) -> DenseMatrix:
    """Place a single-factor operator into the full space with identities elsewhere."""
    dims = layout.dims
    if not 0 <= factor_index < len(dims):
        raise InvalidParameterError(f"factor index {factor_index} out of range for {len(dims)} factors")
    op = as_matrix(op)
    if op.shape != (dims[factor_index],) * 2:
        raise DimensionMismatchError(f"operator shape {op.shape} does not fit factor of dim {dims[factor_index]}")
    return kron_all(op if i == factor_index else identity(d) for i, d in enumerate(dims))


def qubit_operator(kind: PauliKind, k: int, layout: SpaceLayout) -> DenseMatrix:
    return embed(pauli(kind), layout.qubit_factor(k), layout)


def mode_operator(mode: Literal["A", "B"], layout: SpaceLayout) -> DenseMatrix:
    if not layout.has_modes:
        raise InvalidParameterError("qubit-only layout has no modes")
    return embed(annihilation(layout.nmax), layout.factor_index(mode), layout)


def local_operator(factors: Sequence[DenseMatrix], layout: SpaceLayout) -> DenseMatrix:
    """Tensor product of one operator per factor."""
    if len(factors) != len(layout.dims):
        raise DimensionMismatchError(f"expected {len(layout.dims)} factors, got {len(factors)}")
    return kron_all(factors)


def _index_of(digits: Sequence[int], dims: Sequence[int]) -> int:
    index = 0
    for digit, dim in zip(digits, dims):
        if not 0 <= digit < dim:
            raise InvalidParameterError(f"basis digit {digit} out of range for factor of dim {dim}")
        index = index * dim + digit
    return index


def basis_state(label: BasisLabel, layout: SpaceLayout) -> DenseVector:
    if not layout.has_modes:
        raise InvalidParameterError("basis_state needs a layout with modes; use spin_state for qubit-only spaces")
    if len(label.spins) != layout.n_qubits:
        raise DimensionMismatchError(f"label has {len(label.spins)} spins, layout has {layout.n_qubits} qubits")
    psi = np.zeros(layout.total_dim, dtype=np.complex128)
    psi[_index_of((label.nA, label.nB, *[int(s) for s in label.spins]), layout.dims)] = 1.0
    return psi


def spin_state(spins: Sequence[Spin]) -> DenseVector:
    layout = SpaceLayout.qubits(len(spins))
    psi = np.zeros(layout.total_dim, dtype=np.complex128)
    psi[_index_of([int(s) for s in spins], layout.dims)] = 1.0
    return psi


def product_state(vectors: Sequence[DenseVector]) -> DenseVector:
    """Kronecker product of one ket per factor."""
    return kron_all(as_matrix(v).reshape(-1, 1) for v in vectors).reshape(-1)


def single_excitation_index(k: int, layout: SpaceLayout) -> int:
    """Index of |0 0> sigma_plus_k |down...down> (or of sigma_plus_k |down...> for qubit-only layouts)."""
    layout.qubit_factor(k)
    spins = [Spin.UP if j == k else Spin.DOWN for j in range(1, layout.n_qubits + 1)]
    digits = ([0, 0] if layout.has_modes else []) + [int(s) for s in spins]
    return _index_of(digits, layout.dims)


def mode_excitation_index(mode: Literal["A", "B"], layout: SpaceLayout) -> int:
    """Index of |1 0 down...> (A) or |0 1 down...> (B)."""
    digits = [1, 0] if mode == "A" else [0, 1]
    return _index_of(digits + [int(Spin.DOWN)] * layout.n_qubits, layout.dims)


def label_of(index: int, layout: SpaceLayout) -> tuple[int, ...]:
    if not 0 <= index < layout.total_dim:
        raise InvalidParameterError(f"basis index {index} out of range")
    return tuple(int(d) for d in np.unravel_index(index, layout.dims))


def format_label(index: int, layout: SpaceLayout) -> str:
    """Render a basis index as e.g. ``|10↓↑>``."""
    digits = label_of(index, layout)
    offset = 2 if layout.has_modes else 0
    modes = "".join(str(d) for d in digits[:offset])
    spins = "".join(UP_GLYPH if d == Spin.UP else DOWN_GLYPH for d in digits[offset:])
    return f"|{modes}{spins}>"


def excitation_operator(layout: SpaceLayout) -> DenseMatrix:
    """a^dag a + b^dag b + sum_k sigma_plus_k sigma_minus_k."""
    total = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
    if layout.has_modes:
        for mode in ("A", "B"):
            total += embed(number_operator(layout.nmax), layout.factor_index(mode), layout)
    raised = pauli("plus") @ pauli("minus")
    for k in range(1, layout.n_qubits + 1):
        total += embed(raised, layout.qubit_factor(k), layout)
    return total


def partial_trace(rho: DenseMatrix, keep: Iterable[int], layout: SpaceLayout) -> DenseMatrix:
    """Trace out every factor not listed in ``keep``; kept factors retain their layout order."""
    rho = as_matrix(rho)
    dims = layout.dims
    n = len(dims)
    if rho.shape != (layout.total_dim, layout.total_dim):
        raise DimensionMismatchError(f"rho shape {rho.shape} does not match layout dim {layout.total_dim}")
    keep = sorted(set(keep))
    if not keep:
        raise InvalidParameterError("keep must name at least one factor")
    if any(not 0 <= i < n for i in keep):
        raise InvalidParameterError(f"keep indices {keep} out of range for {n} factors")

    letters = string.ascii_letters
    rows = [letters[i] for i in range(n)]
    cols = [letters[i] if i not in keep else letters[n + i] for i in range(n)]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    spec = f"{''.join(rows)}{''.join(cols)}->{''.join(out)}"
    reduced = np.einsum(spec, rho.reshape(dims + dims))
    kept_dim = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(kept_dim, kept_dim)


def fidelity(psi: DenseVector, rho: DenseMatrix) -> float:
    """Pure-state fidelity sqrt(<psi|rho|psi>), clamped to [0, 1]."""
    psi = as_matrix(psi)
    rho = as_matrix(rho)
    if rho.ndim == 1:
        rho = outer(rho)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise DimensionMismatchError(f"state dim {psi.shape[0]} does not match rho shape {rho.shape}")
    overlap = float(np.real(np.vdot(psi, rho @ psi)))
    return float(np.sqrt(min(1.0, max(0.0, overlap))))


def state_fidelity(psi: DenseVector, phi: DenseVector) -> float:
    """|<psi|phi>| for two kets."""
    psi = as_matrix(psi)
    phi = as_matrix(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatchError(f"state shapes {psi.shape} and {phi.shape} differ")
    return float(min(1.0, abs(np.vdot(psi, phi))))


def reduced_purity(rho: DenseMatrix, keep: Iterable[int], layout: SpaceLayout) -> float:
    rho = as_matrix(rho)
    if rho.ndim == 1:
        rho = outer(rho)
    return purity(partial_trace(rho, keep, layout))


def operator_schmidt_rank(op: DenseMatrix, subset: Iterable[int], layout: SpaceLayout, tol: float = 1e-10) -> int:
    """Operator-Schmidt rank of ``op`` across the cut (subset | rest)."""
    op = as_matrix(op)
    dims = layout.dims
    n = len(dims)
    subset = sorted(set(subset))
    rest = [i for i in range(n) if i not in subset]
    if not subset or not rest:
        return 1
    tensor = op.reshape(dims + dims)
    order = subset + [n + i for i in subset] + rest + [n + i for i in rest]
    d_subset = int(np.prod([dims[i] for i in subset]))
    d_rest = int(np.prod([dims[i] for i in rest]))
    matrix = tensor.transpose(order).reshape(d_subset * d_subset, d_rest * d_rest)
    singular = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(singular > tol * max(1.0, singular[0])))


def is_local(op: DenseMatrix, layout: SpaceLayout) -> bool:
    """True when ``op`` factorizes across every single-factor cut."""
    return all(operator_schmidt_rank(op, [i], layout) == 1 for i in range(len(layout.dims)))


def expectation(op: DenseMatrix, rho: DenseMatrix) -> complex:
    rho = as_matrix(rho)
    if rho.ndim == 1:
        return complex(np.vdot(rho, as_matrix(op) @ rho))
    return complex(np.trace(as_matrix(op) @ rho))


__all__ = [
    "BasisLabel",
    "SpaceLayout",
    "Spin",
    "annihilation",
    "basis_state",
    "dagger",
    "embed",
    "excitation_operator",
    "expectation",
    "fidelity",
    "format_label",
    "is_local",
    "label_of",
    "local_operator",
    "mode_excitation_index",
    "mode_operator",
    "number_operator",
    "operator_schmidt_rank",
    "partial_trace",
    "product_state",
    "pauli",
    "qubit_operator",
    "reduced_purity",
    "single_excitation_index",
    "spin_state",
    "state_fidelity",
]
