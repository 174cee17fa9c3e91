# File: backend/app/core/analytic.py
# Purpose: Closed-form quasi-resonant amplitudes and protocol timing formulas
"""
Closed-form solutions of the quasi-resonant bimodal model.

All single-excitation dynamics reduce to a three-level problem in the basis
``(|1 0 down>, |0 1 down>, |0 0 up>)`` whose propagator has eigenvalues ``0, +-Omega_tilde``
with ``Omega_tilde = sqrt(Delta^2 + 2 N Omega^2)``. Simultaneous interaction with all
``s_k = +1`` couples the modes to the symmetric bright state only.

Timing helpers return the smallest non-negative solution and raise
``InfeasibleWindowError`` carrying the admissible detuning interval when none exists.
"""
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
import structlog
from scipy.optimize import minimize_scalar

from app.core.errors import InfeasibleWindowError, InvalidParameterError
from app.core.hilbert import SpaceLayout, mode_excitation_index, single_excitation_index
from app.core.numkit import DenseVector

logger = structlog.get_logger(__name__)

Branch = Literal["positive", "negative"]
WKind = Literal["hybrid", "prototype"]
PKind = Literal["real", "imaginary"]

WINDOW_TOL = 1e-9


def rabi_frequency(Omega: float, Delta: float, N: int = 1) -> float:
    return math.sqrt(Delta**2 + 2 * N * Omega**2)


def _clip_cos(value: float) -> float:
    return min(1.0, max(-1.0, value))


def _check_omega(Omega: float) -> None:
    if Omega <= 0:
        raise InvalidParameterError(f"Omega must be positive, got {Omega}")


def _check_times(*times: float) -> None:
    if any(t < 0 for t in times):
        raise InvalidParameterError(f"times must be non-negative, got {times}")


@dataclass(frozen=True)
class SingleQubitAmplitudes:
    """Amplitudes of |10 down>, |01 down>, |00 up>."""

    c1: complex
    c2: complex
    c3: complex

    def state(self, layout: SpaceLayout) -> DenseVector:
        psi = np.zeros(layout.total_dim, dtype=np.complex128)
        psi[mode_excitation_index("A", layout)] = self.c1
        psi[mode_excitation_index("B", layout)] = self.c2
        psi[single_excitation_index(1, layout)] = self.c3
        return psi

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.c1) ** 2 + abs(self.c2) ** 2 + abs(self.c3) ** 2)


@dataclass(frozen=True)
class SequentialAmplitudes:
    """Amplitudes of |10 down down>, |01 down down>, |00 up down>, |00 down up>."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def state(self, layout: SpaceLayout) -> DenseVector:
        psi = np.zeros(layout.total_dim, dtype=np.complex128)
        psi[mode_excitation_index("A", layout)] = self.alpha
        psi[mode_excitation_index("B", layout)] = self.beta
        psi[single_excitation_index(1, layout)] = self.gamma
        psi[single_excitation_index(2, layout)] = self.delta
        return psi

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(x) ** 2 for x in (self.alpha, self.beta, self.gamma, self.delta)))


@dataclass(frozen=True)
class SimultaneousAmplitudes:
    aN: complex
    bN: complex
    cN: tuple[complex, ...]
    Omega_tilde: float

    @property
    def N(self) -> int:
        return len(self.cN)

    def state(self, layout: SpaceLayout) -> DenseVector:
        psi = np.zeros(layout.total_dim, dtype=np.complex128)
        psi[mode_excitation_index("A", layout)] = self.aN
        psi[mode_excitation_index("B", layout)] = self.bN
        for k, ck in enumerate(self.cN, start=1):
            psi[single_excitation_index(k, layout)] = ck
        return psi

    @property
    def populations(self) -> tuple[float, ...]:
        """|aN|^2, |bN|^2, then |c_k|^2 for each qubit."""
        return (abs(self.aN) ** 2, abs(self.bN) ** 2, *(abs(c) ** 2 for c in self.cN))

    @property
    def norm(self) -> float:
        return math.sqrt(sum(self.populations))


@dataclass(frozen=True)
class BellPrimeParameter:
    p: complex
    Delta0: float

    @property
    def modes_state(self) -> tuple[complex, complex]:
        """Amplitudes of |10> and |01> after the auxiliary qubit (s0 = -1) has decayed into the modes."""
        return self.p, self.p.conjugate()


# ---------------------------------------------------------------------------
# Single qubit
# ---------------------------------------------------------------------------


def single_qubit_amplitudes(Omega: float, Delta: float, s1: int, t: float) -> SingleQubitAmplitudes:
    _check_omega(Omega)
    _check_times(t)
    rt = rabi_frequency(Omega, Delta)
    cos, sin = math.cos(rt * t), math.sin(rt * t)
    c1 = -(Omega / rt**2) * complex(Delta * (1 - cos), rt * sin)
    c3 = (Delta**2 + 2 * Omega**2 * cos) / rt**2
    return SingleQubitAmplitudes(c1=c1, c2=-s1 * c1.conjugate(), c3=complex(c3))


def p_up_single(Omega: float, Delta: float, t: float) -> float:
    return abs(single_qubit_amplitudes(Omega, Delta, 1, t).c3) ** 2


def p_up_window(P_target: float, branch: Branch = "positive") -> tuple[float, float]:
    """Admissible Delta/Omega interval for reaching c3 = +-sqrt(P_target)."""
    root = math.sqrt(P_target)
    signed = root if branch == "positive" else -root
    if signed >= 1:
        return 0.0, math.inf
    return 0.0, math.sqrt(2 * (1 + signed) / (1 - signed))


def time_for_p_up(Omega: float, Delta: float, P_target: float, branch: Branch = "positive") -> float:
    """
    Shortest time at which the single qubit keeps up-amplitude c3 = +-sqrt(P_target).

    Args:
        Omega: Coupling
        Delta: Detuning (non-negative)
        P_target: Requested up-state probability in [0, 1]
        branch: ``positive`` targets c3 = +sqrt(P), ``negative`` targets c3 = -sqrt(P)

    Returns:
        Interaction time

    Raises:
        InvalidParameterError: P_target outside [0, 1] or Delta < 0
        InfeasibleWindowError: Delta/Omega outside the admissible window
    """
    _check_omega(Omega)
    if not 0 <= P_target <= 1:
        raise InvalidParameterError(f"P_target must lie in [0, 1], got {P_target}")
    if branch not in ("positive", "negative"):
        raise InvalidParameterError(f"unknown branch {branch!r}")
    lower, upper = p_up_window(P_target, branch)
    ratio = Delta / Omega
    if ratio < lower or ratio > upper * (1 + WINDOW_TOL) + WINDOW_TOL:
        raise InfeasibleWindowError("Delta/Omega", ratio, lower, upper, detail=f"P_up={P_target:g}, {branch} branch")
    rt = rabi_frequency(Omega, Delta)
    signed = math.sqrt(P_target) * (1 if branch == "positive" else -1)
    argument = (rt**2 * signed - Delta**2) / (2 * Omega**2)
    return math.acos(_clip_cos(argument)) / rt


# ---------------------------------------------------------------------------
# Two qubits in sequence
# ---------------------------------------------------------------------------


def _mode_response(Omega: float, Delta: float, s: int, t: float, N: int = 1) -> tuple[complex, complex]:
    """Amplitudes a(t), b(t) of |10> and |01> starting from |10> with N bright-coupled qubits down."""
    rt = rabi_frequency(Omega, Delta, N)
    cos, sin = math.cos(rt * t), math.sin(rt * t)
    w = N * Omega**2
    a = complex(w + (w + Delta**2) * cos, -Delta * rt * sin) / rt**2
    b = -s * (w / rt**2) * (1 - cos)
    return a, complex(b)


def sequential_amplitudes(
    Omega: float,
    Delta: float,
    s1: int,
    s2: int,
    t1: float,
    td: float,
    t2: float,
) -> SequentialAmplitudes:
    """Qubit 1 for t1, free modes for td, then qubit 2 for t2, starting from |00 up down>."""
    _check_omega(Omega)
    _check_times(t1, td, t2)
    first = single_qubit_amplitudes(Omega, Delta, s1, t1)
    second = single_qubit_amplitudes(Omega, Delta, s2, t2)
    a2, b2 = _mode_response(Omega, Delta, s2, t2)
    lag = complex(math.cos(Delta * td), -math.sin(Delta * td))
    lead = lag.conjugate()
    return SequentialAmplitudes(
        alpha=first.c1 * a2 * lag + first.c2 * b2 * lead,
        beta=first.c1 * b2 * lag + first.c2 * a2.conjugate() * lead,
        gamma=first.c3,
        delta=first.c1 * second.c1 * lag + first.c2 * second.c2 * lead,
    )


def delay_for_parity(Delta: float, j: int) -> float:
    """Delay td = j pi / (2 Delta) between the two qubits."""
    if Delta <= 0:
        raise InvalidParameterError(f"Delta must be positive, got {Delta}")
    if j < 0:
        raise InvalidParameterError(f"j must be a non-negative integer, got {j}")
    return j * math.pi / (2 * Delta)


def sequential_p_up_second(
    Omega: float, Delta: float, s1: int, s2: int, t1: float, td: float, t2: float
) -> float:
    """Up probability of qubit 2 for an arbitrary delay."""
    return abs(sequential_amplitudes(Omega, Delta, s1, s2, t1, td, t2).delta) ** 2


def p_up_second(Omega: float, Delta: float, s1: int, s2: int, t1: float, t2: float, j: int) -> float:
    """Up probability of qubit 2 for the delay td = j pi / (2 Delta)."""
    delay_for_parity(Delta, j)
    c1_first = single_qubit_amplitudes(Omega, Delta, s1, t1).c1
    c1_second = single_qubit_amplitudes(Omega, Delta, s2, t2).c1
    interference = (-1) ** j * s1 * s2 * ((c1_first**2) * (c1_second**2)).real
    return 2 * (abs(c1_first) ** 2 * abs(c1_second) ** 2 + interference)


# ---------------------------------------------------------------------------
# N qubits at once
# ---------------------------------------------------------------------------


def _check_n(N: int) -> None:
    if N < 1:
        raise InvalidParameterError(f"N must be >= 1, got {N}")


def simultaneous_vacuum_amplitudes(N: int, Omega: float, Delta: float, t: float) -> SimultaneousAmplitudes:
    """Modes in vacuum, qubit 1 up, qubits 2..N down, all couplings s_k = +1."""
    _check_n(N)
    _check_omega(Omega)
    _check_times(t)
    rt = rabi_frequency(Omega, Delta, N)
    cos, sin = math.cos(rt * t), math.sin(rt * t)
    a = -(Omega / rt**2) * complex(Delta * (1 - cos), rt * sin)
    b = (Omega / rt**2) * complex(Delta * (1 - cos), -rt * sin)
    c1 = 1 - (2 * Omega**2 / rt**2) * (1 - cos)
    return SimultaneousAmplitudes(aN=a, bN=b, cN=(complex(c1),) + (complex(c1 - 1),) * (N - 1), Omega_tilde=rt)


def simultaneous_time_for_p_up(N: int, Omega: float, Delta: float, P_target: float, qubit: int = 1) -> float:
    """
    Shortest time at which c_1 = +sqrt(P) (qubit 1) or c_k = -sqrt(P) (k > 1) in the vacuum-seeded scheme.

    Inverts c_1 = 1 - (2 Omega^2 / Omega_N^2)(1 - cos Omega_N t) directly; c_k = c_1 - 1 <= 0 fixes
    the qubit-k branch.
    """
    _check_n(N)
    _check_omega(Omega)
    if not 0 <= P_target <= 1:
        raise InvalidParameterError(f"P_target must lie in [0, 1], got {P_target}")
    if qubit != 1 and (N < 2 or not 1 <= qubit <= N):
        raise InvalidParameterError(f"qubit {qubit} out of range 1..{N}")
    rt = rabi_frequency(Omega, Delta, N)
    target_c1 = math.sqrt(P_target) if qubit == 1 else 1 - math.sqrt(P_target)
    argument = 1 - rt**2 * (1 - target_c1) / (2 * Omega**2)
    if argument < -1 - WINDOW_TOL:
        # admissible while Delta^2 + 2 N Omega^2 <= 4 Omega^2 / (1 - c1)
        upper_sq = 4 / (1 - target_c1) - 2 * N
        upper = math.sqrt(upper_sq) if upper_sq >= 0 else float("nan")
        raise InfeasibleWindowError(
            "Delta/Omega", Delta / Omega, 0.0, upper, detail=f"N={N}, qubit {qubit}, P_up={P_target:g}"
        )
    return math.acos(_clip_cos(argument)) / rt


def w_feasible_counts() -> dict[str, int]:
    """
    Qubit counts for which the vacuum-seeded scheme yields equal populations.

    The counts do not depend on Omega, Delta or t. After a simultaneous pass from one excited
    qubit the amplitudes are c_1 for that qubit and c_1 - 1 for every other one, with c_1 real.
    Equal moduli |c_1| = |c_1 - 1| therefore pin c_1 = 1/2, so each qubit population is 1/4:

    - prototype (modes end in vacuum): N qubits at 1/N each, so N = 4
    - hybrid (both modes share the weight): N + 2 parts at 1/(N + 2) each, so N = 2

    ``w_feasibility_scan`` confirms numerically that no other N comes close.
    """
    c1 = 0.5
    population = c1**2
    return {"hybrid": round(1 / population) - 2, "prototype": round(1 / population)}


def _vacuum_deviation(N: int, Omega: float, Delta: float, kind: WKind, t: np.ndarray) -> np.ndarray:
    rt = rabi_frequency(Omega, Delta, N)
    cos, sin = np.cos(rt * t), np.sin(rt * t)
    mode_pop = (Omega / rt**2) ** 2 * ((Delta * (1 - cos)) ** 2 + (rt * sin) ** 2)
    c1 = 1 - (2 * Omega**2 / rt**2) * (1 - cos)
    if kind == "hybrid":
        target, mode_target = 1 / (N + 2), 1 / (N + 2)
    else:
        target, mode_target = 1 / N, 0.0
    squared = 2 * (mode_pop - mode_target) ** 2 + (c1**2 - target) ** 2 + (N - 1) * ((c1 - 1) ** 2 - target) ** 2
    return squared


def w_feasibility_scan(
    kind: WKind,
    counts: Sequence[int] = tuple(range(2, 11)),
    delta_grid: Sequence[float] = tuple(np.linspace(0.0, 3.0, 61)),
    time_points: int = 4001,
    Omega: float = 1.0,
) -> dict[int, float]:
    """
    Brute-force check of ``w_feasible_counts``.

    For every N, scan Delta/Omega and one Rabi period of t, polish the best grid point with a
    bounded scalar minimization and report the smallest root-sum-square deviation of all
    populations from their W-state values.
    """
    best: dict[int, float] = {}
    for N in counts:
        _check_n(N)
        smallest = math.inf
        for ratio in delta_grid:
            Delta = float(ratio) * Omega
            period = 2 * math.pi / rabi_frequency(Omega, Delta, N)
            grid = np.linspace(0.0, period, time_points)
            values = _vacuum_deviation(N, Omega, Delta, kind, grid)
            i = int(np.argmin(values))
            step = grid[1] - grid[0]
            polished = minimize_scalar(
                lambda t: float(_vacuum_deviation(N, Omega, Delta, kind, np.array([t]))[0]),
                bounds=(max(0.0, grid[i] - step), grid[i] + step),
                method="bounded",
                options={"xatol": 1e-14},
            )
            smallest = min(smallest, float(values[i]), float(polished.fun))
        best[N] = math.sqrt(max(0.0, smallest))
        logger.debug("w_feasibility_scanned", kind=kind, N=N, deviation=best[N])
    return best


def bell_prime_parameter(Omega: float, Delta0: float) -> BellPrimeParameter:
    """Modes amplitude p left by an auxiliary qubit that gives its excitation away completely."""
    _check_omega(Omega)
    ratio = Delta0 / Omega
    upper = math.sqrt(2)
    if ratio < 0 or ratio > upper * (1 + WINDOW_TOL):
        raise InfeasibleWindowError("Delta0/Omega", ratio, 0.0, upper, detail="auxiliary transfer incomplete")
    p = -0.5 * complex(ratio, math.sqrt(max(0.0, 2 - ratio**2)))
    return BellPrimeParameter(p=p, Delta0=Delta0)


def bell_primed_amplitudes(N: int, Omega: float, Delta: float, p: complex, t: float) -> SimultaneousAmplitudes:
    """Modes in p|10> + p*|01>, all N qubits down, all couplings s_k = +1."""
    _check_n(N)
    _check_omega(Omega)
    _check_times(t)
    if abs(abs(p) ** 2 - 0.5) > 1e-9:
        raise InvalidParameterError(f"|p|^2 must equal 1/2, got {abs(p) ** 2:.12g}")
    rt = rabi_frequency(Omega, Delta, N)
    cos, sin = math.cos(rt * t), math.sin(rt * t)
    pc = p.conjugate()
    w = N * Omega**2
    a = ((p - pc) * w + (p * Delta**2 + (p + pc) * w) * cos - 1j * p * Delta * rt * sin) / rt**2
    b = ((pc - p) * w + (pc * Delta**2 + (p + pc) * w) * cos + 1j * pc * Delta * rt * sin) / rt**2
    c = (Omega / rt**2) * ((pc - p) * Delta * (1 - cos) - 1j * (p + pc) * rt * sin)
    return SimultaneousAmplitudes(aN=complex(a), bN=complex(b), cN=(complex(c),) * N, Omega_tilde=rt)


def w_population(N: int, kind: WKind) -> float:
    _check_n(N)
    return 1 / (N + 2) if kind == "hybrid" else 1 / N


def w_window(N: int, kind: WKind, p_kind: PKind) -> tuple[float, float]:
    """Admissible Delta/Omega interval for a W state after Bell priming."""
    P = w_population(N, kind)
    if p_kind == "real":
        return 0.0, math.sqrt(2) * math.sqrt(max(0.0, 1 / P - N))
    if p_kind == "imaginary":
        spread = math.sqrt(max(0.0, 1 - N * P))
        scale = math.sqrt(2) / math.sqrt(P)
        return scale * (1 - spread), scale * (1 + spread)
    raise InvalidParameterError(f"unknown p kind {p_kind!r}")


def time_for_w(N: int, kind: WKind, p_kind: PKind, Omega: float, Delta: float) -> float:
    """
    Shortest time giving |c_k|^2 = 1/(N+2) (hybrid) or 1/N (prototype) after Bell priming.

    Raises:
        InfeasibleWindowError: Delta/Omega outside the window for (kind, p_kind)
    """
    _check_omega(Omega)
    if kind not in ("hybrid", "prototype"):
        raise InvalidParameterError(f"unknown W kind {kind!r}")
    lower, upper = w_window(N, kind, p_kind)
    ratio = Delta / Omega
    slack = WINDOW_TOL * max(1.0, upper)
    if ratio < lower - slack or ratio > upper + slack:
        raise InfeasibleWindowError("Delta/Omega", ratio, lower, upper, detail=f"{kind} W, p {p_kind}, N={N}")
    P = w_population(N, kind)
    rt = rabi_frequency(Omega, Delta, N)
    if p_kind == "real":
        return math.asin(_clip_cos(rt * math.sqrt(P) / (math.sqrt(2) * Omega))) / rt
    scale = math.sqrt(2) * Omega * Delta
    if scale == 0:
        raise InfeasibleWindowError("Delta/Omega", ratio, lower, upper, detail="imaginary p needs Delta > 0")
    return math.acos(_clip_cos((scale - rt**2 * math.sqrt(P)) / scale)) / rt
