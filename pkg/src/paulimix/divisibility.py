"""Decay rates of the time-local generator and Markovianity checks.

For a Pauli mixture the generator is purely dissipative,
``L(t)[rho] = sum_i gamma_i(t) (s_i rho s_i - rho)``, and the rates follow
from the Pauli-transfer eigenvalues ``lambda_i(t)``. A rate that dips below
zero means some intermediate propagator is not completely positive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channels import (DecoherenceFunction, MixingWeights, PauliMixture, mixture_apply,
                       mixture_ptm, p_of_t)
from .qmath import check_density_matrix, trace_distance

DEFAULT_TOL = 1e-9
CP_TOL = 1e-10
DEFAULT_GRID = (0.0, 1.5, 151)


class SingularRateError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DecayRates:
    t: float
    gamma1: float
    gamma2: float
    gamma3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.gamma1, self.gamma2, self.gamma3])

    def __getitem__(self, axis: int) -> float:
        return (self.gamma1, self.gamma2, self.gamma3)[axis - 1]


def rates_at(weights: MixingWeights, p: float, pdot: float,
             denominators: Sequence[float] | None = None) -> tuple[float, float, float]:
    """Decay rates for given ``p`` and ``dp/dt``.

    With ``g_i = (1 - x_i) / (1 - 2 (1 - x_i) p)`` each rate is
    ``gamma_i = (g_j + g_k - g_i) * pdot / 2``. ``denominators`` may supply
    ``1 - 2 (1 - x_i) p`` computed in a cancellation-free way.
    """
    if denominators is None:
        denominators = [1 - 2 * (1 - x) * p for x in weights]
    g = []
    for x, denom in zip(weights, denominators):
        if denom <= 0:
            raise SingularRateError(f"rate denominator {denom} vanished at p={p}")
        g.append((1 - x) / denom)
    total = g[0] + g[1] + g[2]
    return tuple((total - 2 * gi) * pdot / 2 for gi in g)


def decay_rates(m: PauliMixture, t: float) -> DecayRates:
    # 1 - 2(1 - x)p == x + (1 - x) exp(-ct); stays positive where 1 - 2p rounds to 0
    decay = math.exp(-m.decoherence.c * t)
    denoms = [x + (1 - x) * decay for x in m.weights]
    return DecayRates(t, *rates_at(m.weights, m.p(t), m.pdot(t), denoms))


def two_mix_gamma1(a: float, f: DecoherenceFunction, t: float) -> float:
    """Closed form of ``gamma_1`` for ``a*Lambda_3 + (1 - a)*Lambda_2``.

    Equals ``-2 a (1-a) p (1-p) pdot / ((1-2p)(1-2ap)(1-2(1-a)p))``, which is
    strictly negative for ``0 < a < 1`` and ``t > 0``.
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a={a} is outside [0, 1]")
    p = p_of_t(f, t)
    decay = math.exp(-f.c * t)
    # pdot / (1 - 2p) == c / 2 exactly
    num = a * (1 - a) * (1 - p) * p
    den = (a + (1 - a) * decay) * ((1 - a) + a * decay)
    return -num / den * f.c


@dataclass(frozen=True)
class RateTrajectory:
    mixture: PauliMixture
    grid: np.ndarray
    rates: tuple

    def __post_init__(self):
        if len(self.grid) != len(self.rates):
            raise ValueError("grid and rates differ in length")
        if len(self.grid) > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("time grid must be strictly increasing")

    @property
    def gammas(self) -> np.ndarray:
        """Rates as an ``(n, 3)`` array."""
        return np.array([r.as_array() for r in self.rates]).reshape(-1, 3)

    def __len__(self):
        return len(self.rates)


def uniform_grid(t_start: float, t_end: float, n: int) -> np.ndarray:
    if not (0 <= t_start < t_end):
        raise ValueError(f"need 0 <= t_start < t_end, got [{t_start}, {t_end}]")
    if n < 2:
        raise ValueError(f"need at least 2 grid points, got {n}")
    return np.linspace(t_start, t_end, n)


def trajectory_on(m: PauliMixture, grid: Sequence[float]) -> RateTrajectory:
    grid = np.asarray(grid, dtype=float)
    return RateTrajectory(m, grid, tuple(decay_rates(m, float(t)) for t in grid))


def rate_trajectory(m: PauliMixture, t_start: float = DEFAULT_GRID[0],
                    t_end: float = DEFAULT_GRID[1], n: int = DEFAULT_GRID[2]) -> RateTrajectory:
    return trajectory_on(m, uniform_grid(t_start, t_end, n))


class Verdict(str, enum.Enum):
    MARKOVIAN = "Markovian"
    NON_MARKOVIAN = "NonMarkovian"

    def __str__(self):
        return self.value


class Witness(NamedTuple):
    t: float
    axis: int


@dataclass(frozen=True)
class MarkovClass:
    verdict: Verdict
    witness: Witness | None = None

    def __post_init__(self):
        if (self.verdict is Verdict.NON_MARKOVIAN) != (self.witness is not None):
            raise ValueError("a witness is required exactly for non-Markovian verdicts")

    @property
    def is_markovian(self) -> bool:
        return self.verdict is Verdict.MARKOVIAN


def classify(traj: RateTrajectory, tol: float = DEFAULT_TOL) -> MarkovClass:
    """Flag the first grid point where any rate drops below ``-tol``."""
    if len(traj) == 0:
        raise ValueError("cannot classify an empty trajectory")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for r in traj.rates:
        for axis in (1, 2, 3):
            if r[axis] < -tol:
                return MarkovClass(Verdict.NON_MARKOVIAN, Witness(float(r.t), axis))
    return MarkovClass(Verdict.MARKOVIAN)


def sign_change_time(m: PauliMixture, axis: int, t_lo: float, t_hi: float,
                     xtol: float = 1e-6) -> float:
    """Bisect for a zero of ``gamma_axis`` inside ``[t_lo, t_hi]``."""
    f_lo = decay_rates(m, t_lo)[axis]
    f_hi = decay_rates(m, t_hi)[axis]
    if f_lo == 0:
        return t_lo
    if f_lo * f_hi > 0:
        raise ValueError(f"gamma_{axis} does not change sign on [{t_lo}, {t_hi}]")
    while t_hi - t_lo > xtol:
        mid = 0.5 * (t_lo + t_hi)
        f_mid = decay_rates(m, mid)[axis]
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            t_lo, f_lo = mid, f_mid
        else:
            t_hi = mid
    return 0.5 * (t_lo + t_hi)


def choi_margins(mu: Sequence[float]) -> np.ndarray:
    """Pauli-branch weights of a diagonal Pauli map with eigenvalues ``mu``.

    The map is completely positive iff all four are non-negative.
    """
    m1, m2, m3 = mu
    return np.array([
        1 + m1 + m2 + m3,
        1 + m1 - m2 - m3,
        1 - m1 + m2 - m3,
        1 - m1 - m2 + m3,
    ]) / 4


def pauli_choi_matrix(mu: Sequence[float]) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) Phi(|i><j|)`` of a diagonal Pauli map."""
    from .channels import PauliTransferDiagonal, ptm_apply

    ptm = PauliTransferDiagonal(*mu)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1
            choi += np.kron(e, ptm_apply(ptm, e))
    return choi


class CPCheck(NamedTuple):
    is_cp: bool
    margins: np.ndarray


def propagator_cp_check(m: PauliMixture, t1: float, t2: float, tol: float = CP_TOL) -> CPCheck:
    """Complete positivity of the propagator taking the map from ``t1`` to ``t2``."""
    if t2 < t1:
        raise ValueError(f"need t2 >= t1, got t1={t1}, t2={t2}")
    lam1 = np.array(mixture_ptm(m, t1))
    lam2 = np.array(mixture_ptm(m, t2))
    margins = choi_margins(lam2 / lam1)
    return CPCheck(bool(np.all(margins >= -tol)), margins)


def blp_monitor(m: PauliMixture, rho1: np.ndarray, rho2: np.ndarray,
                grid: Sequence[float]) -> list[tuple[float, float]]:
    """Trace distance between the two evolved states at each time."""
    rho1 = check_density_matrix(rho1, 2)
    rho2 = check_density_matrix(rho2, 2)
    grid = [float(t) for t in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("time grid must be strictly increasing")
    return [(t, trace_distance(mixture_apply(m, rho1, t), mixture_apply(m, rho2, t)))
            for t in grid]
