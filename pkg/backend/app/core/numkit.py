# File: backend/app/core/numkit.py
# Purpose: Dense complex linear algebra and time-propagation primitives
"""
Numerical kernel shared by every other module.

Operators and states are plain ``numpy`` complex128 arrays: a ket is a 1-D array of
length ``dim``, an operator or density matrix a ``(rows, cols)`` array. All functions
are pure; inputs are never mutated.

Conventions
-----------
- Superoperators act on column-stacked density matrices: ``vec(rho) = rho.reshape(-1, order="F")``,
  so ``vec(A X B) = (B.T kron A) vec(X)``.
- Fixed-step integrators default to ``DEFAULT_STEPS`` steps over the requested interval.
"""
import math
from functools import reduce
from typing import Callable, Iterable, Sequence, Union

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.linalg import expm, sqrtm

from app.core.errors import DimensionMismatchError, InvalidParameterError

logger = structlog.get_logger(__name__)

DenseMatrix = NDArray[np.complex128]
DenseVector = NDArray[np.complex128]
HamiltonianLike = Union[DenseMatrix, Callable[[float], DenseMatrix]]
Superoperator = Callable[[DenseMatrix], DenseMatrix]

DEFAULT_STEPS = 20000


def as_matrix(a) -> DenseMatrix:
    return np.asarray(a, dtype=np.complex128)


def dagger(a: DenseMatrix) -> DenseMatrix:
    return np.conjugate(np.transpose(a))


def identity(dim: int) -> DenseMatrix:
    return np.eye(dim, dtype=np.complex128)


def _require_square(a: DenseMatrix, what: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{what} must be square, got shape {a.shape}")


def kron(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Kronecker product; entry (i*B.rows+k, j*B.cols+l) = A(i,j) * B(k,l)."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Iterable[DenseMatrix]) -> DenseMatrix:
    factors = list(factors)
    if not factors:
        raise InvalidParameterError("kron_all needs at least one factor")
    return reduce(kron, factors)


def commutator(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    return a @ b - b @ a


def matrix_exponential(a: DenseMatrix) -> DenseMatrix:
    """
    exp(A) by scaling-and-squaring with a Pade core (``scipy.linalg.expm``).

    Raises:
        DimensionMismatchError: if ``a`` is not square
    """
    a = as_matrix(a)
    _require_square(a, "matrix_exponential input")
    return expm(a)


def propagator(h: DenseMatrix, t: float) -> DenseMatrix:
    """exp(-i H t) for a time-independent Hamiltonian."""
    return matrix_exponential(-1j * as_matrix(h) * t)


def _resolve_steps(total_time: float, dt: float | None) -> tuple[int, float]:
    if dt is None:
        return DEFAULT_STEPS, total_time / DEFAULT_STEPS
    if dt <= 0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    steps = max(1, int(math.ceil(total_time / dt - 1e-12)))
    return steps, total_time / steps


def _as_time_function(h: HamiltonianLike) -> Callable[[float], DenseMatrix]:
    if callable(h):
        return h
    constant = as_matrix(h)
    return lambda _t: constant


def evolve_state(
    h: HamiltonianLike,
    psi0: DenseVector,
    total_time: float,
    dt: float | None = None,
    t0: float = 0.0,
) -> DenseVector:
    """
    Classical fixed-step RK4 integration of i dpsi/dt = H(t) psi.

    Args:
        h: Hamiltonian matrix or a callable t -> H(t)
        psi0: Initial ket
        total_time: Length of the integration interval
        dt: Step size (default: total_time / DEFAULT_STEPS)
        t0: Start time passed to the Hamiltonian evaluator

    Returns:
        The ket at t0 + total_time
    """
    psi = as_matrix(psi0).copy()
    if total_time == 0:
        return psi
    h_of_t = _as_time_function(h)
    first = h_of_t(t0)
    _require_square(first, "Hamiltonian")
    if first.shape[0] != psi.shape[0]:
        raise DimensionMismatchError(f"Hamiltonian dim {first.shape[0]} does not match state dim {psi.shape[0]}")

    steps, step = _resolve_steps(total_time, dt)
    t = t0
    for _ in range(steps):
        h_start = h_of_t(t)
        h_mid = h_of_t(t + 0.5 * step)
        h_end = h_of_t(t + step)
        k1 = -1j * (h_start @ psi)
        k2 = -1j * (h_mid @ (psi + 0.5 * step * k1))
        k3 = -1j * (h_mid @ (psi + 0.5 * step * k2))
        k4 = -1j * (h_end @ (psi + step * k3))
        psi = psi + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += step
    return psi


def hermitian_part(rho: DenseMatrix) -> DenseMatrix:
    return 0.5 * (rho + dagger(rho))


def evolve_density(
    generator: Superoperator,
    rho0: DenseMatrix,
    total_time: float,
    dt: float | None = None,
) -> DenseMatrix:
    """
    Fixed-step RK4 integration of drho/dt = L(rho).

    Hermiticity is restored after every step by rho <- (rho + rho^dagger) / 2.
    """
    rho = as_matrix(rho0).copy()
    _require_square(rho, "density matrix")
    if total_time == 0:
        return rho
    probe = generator(rho)
    if probe.shape != rho.shape:
        raise DimensionMismatchError(f"generator output shape {probe.shape} does not match rho shape {rho.shape}")

    steps, step = _resolve_steps(total_time, dt)
    for _ in range(steps):
        k1 = generator(rho)
        k2 = generator(rho + 0.5 * step * k1)
        k3 = generator(rho + 0.5 * step * k2)
        k4 = generator(rho + step * k3)
        rho = hermitian_part(rho + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4))
    return rho


def vec(rho: DenseMatrix) -> DenseVector:
    return as_matrix(rho).reshape(-1, order="F")


def unvec(v: DenseVector, dim: int) -> DenseMatrix:
    return as_matrix(v).reshape((dim, dim), order="F")


def liouvillian_matrix(h: DenseMatrix, channels: Sequence[DenseMatrix]) -> DenseMatrix:
    """
    Column-stacking matrix of rho -> -i[H, rho] + sum_c (c rho c^dag - {c^dag c, rho}/2).

    Channel operators are expected to already carry their sqrt(rate) factor.
    """
    h = as_matrix(h)
    _require_square(h, "Hamiltonian")
    dim = h.shape[0]
    eye = identity(dim)
    lmat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for c in channels:
        c = as_matrix(c)
        if c.shape != h.shape:
            raise DimensionMismatchError(f"channel shape {c.shape} does not match Hamiltonian shape {h.shape}")
        cdc = dagger(c) @ c
        lmat = lmat + np.kron(np.conjugate(c), c) - 0.5 * np.kron(eye, cdc) - 0.5 * np.kron(cdc.T, eye)
    return lmat


def evolve_density_exact(lmat: DenseMatrix, rho0: DenseMatrix, total_time: float) -> DenseMatrix:
    """Exact propagation rho(T) = unvec(exp(L T) vec(rho0)) for a constant generator."""
    rho0 = as_matrix(rho0)
    dim = rho0.shape[0]
    if lmat.shape != (dim * dim, dim * dim):
        raise DimensionMismatchError(f"superoperator shape {lmat.shape} does not act on {dim}x{dim} matrices")
    if total_time == 0:
        return rho0.copy()
    return hermitian_part(unvec(matrix_exponential(lmat * total_time) @ vec(rho0), dim))


def converge_by_halving(
    run: Callable[[int], np.ndarray],
    steps: int = DEFAULT_STEPS,
    tol: float = 1e-8,
    max_halvings: int = 4,
) -> np.ndarray:
    """
    Re-run an integration with half the step until successive results agree.

    Args:
        run: Callable taking a step count and returning the integrated result
        steps: Initial step count
        tol: Accept when max |result(2n) - result(n)| < tol
        max_halvings: Upper bound on the number of refinements

    Returns:
        The finest result computed
    """
    coarse = run(steps)
    for _ in range(max_halvings):
        steps *= 2
        fine = run(steps)
        change = float(np.max(np.abs(fine - coarse)))
        logger.debug("step_halving", steps=steps, change=change)
        if change < tol:
            return fine
        coarse = fine
    logger.warning("step_halving_not_converged", steps=steps, tol=tol)
    return coarse


def normalize(psi: DenseVector) -> DenseVector:
    psi = as_matrix(psi)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidParameterError("cannot normalize the zero vector")
    return psi / norm


def outer(psi: DenseVector) -> DenseMatrix:
    psi = as_matrix(psi)
    return np.outer(psi, np.conjugate(psi))


def is_hermitian(a: DenseMatrix, atol: float = 1e-12) -> bool:
    return bool(np.allclose(a, dagger(a), atol=atol, rtol=0.0))


def is_unitary(a: DenseMatrix, atol: float = 1e-12) -> bool:
    a = as_matrix(a)
    return bool(np.allclose(dagger(a) @ a, identity(a.shape[0]), atol=atol, rtol=0.0))


def min_eigenvalue(rho: DenseMatrix) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(as_matrix(rho)))[0])


def purity(rho: DenseMatrix) -> float:
    rho = as_matrix(rho)
    return float(np.real(np.trace(rho @ rho)))


def principal_sqrt(a: DenseMatrix) -> DenseMatrix:
    """Principal matrix square root (branch cut on the negative real axis)."""
    a = as_matrix(a)
    _require_square(a, "principal_sqrt input")
    return as_matrix(sqrtm(a))


class HermitianPropagator:
    """exp(-i H t) psi for many t from one eigendecomposition of a Hermitian H."""

    def __init__(self, h: DenseMatrix):
        h = as_matrix(h)
        _require_square(h, "Hamiltonian")
        self.dim = h.shape[0]
        self._energies, self._vectors = np.linalg.eigh(hermitian_part(h))

    def apply(self, psi: DenseVector, t: float) -> DenseVector:
        psi = as_matrix(psi)
        if psi.shape[0] != self.dim:
            raise DimensionMismatchError(f"state dim {psi.shape[0]} does not match Hamiltonian dim {self.dim}")
        coefficients = dagger(self._vectors) @ psi
        return self._vectors @ (np.exp(-1j * self._energies * t) * coefficients)


class LiouvillePropagator:
    """
    exp(L t) applied to vec(rho) for a constant Liouvillian.

    Uses an eigendecomposition of L when its eigenvector matrix is well conditioned and falls
    back to ``scipy.linalg.expm`` otherwise.
    """

    MAX_CONDITION = 1e8

    def __init__(self, lmat: DenseMatrix):
        lmat = as_matrix(lmat)
        _require_square(lmat, "Liouvillian")
        self.dim = int(round(math.sqrt(lmat.shape[0])))
        if self.dim * self.dim != lmat.shape[0]:
            raise DimensionMismatchError(f"Liouvillian size {lmat.shape[0]} is not a perfect square")
        self._lmat = lmat
        rates, vectors = np.linalg.eig(lmat)
        condition = float(np.linalg.cond(vectors))
        if math.isfinite(condition) and condition < self.MAX_CONDITION:
            self._rates = rates
            self._vectors = vectors
            self._inverse = np.linalg.inv(vectors)
        else:
            logger.debug("liouvillian_defective", condition=condition)
            self._rates = None

    def apply(self, rho: DenseMatrix, t: float) -> DenseMatrix:
        rho = as_matrix(rho)
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatchError(f"rho shape {rho.shape} does not match Liouvillian dim {self.dim}")
        if t == 0:
            return rho.copy()
        if self._rates is None:
            out = matrix_exponential(self._lmat * t) @ vec(rho)
        else:
            out = self._vectors @ (np.exp(self._rates * t) * (self._inverse @ vec(rho)))
        return hermitian_part(unvec(out, self.dim))
