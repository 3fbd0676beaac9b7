"""Recovering the decoherence function from reconstructed states.

Each reconstructed system state gives a point estimate of ``p(t)``; the
estimates are fitted to ``(1 - exp(-c t)) / 2`` and the fitted ``c`` is pushed
back through the decay-rate formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import DecoherenceFunction, MixingWeights, PauliMixture
from .divisibility import (DEFAULT_GRID, DEFAULT_TOL, MarkovClass, RateTrajectory, classify,
                           trajectory_on, uniform_grid)
from .simulator import ExperimentPoint, NoiseModel, synthetic_experiment

P_MAX = 0.5 - 1e-9
C_BRACKET = (1e-3, 50.0)
_GOLDEN = (math.sqrt(5) - 1) / 2


class NonIdentifiableError(ValueError):
    pass


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class PEstimate:
    t: float
    p_hat: float
    residual: float


def estimate_p(rho_meas: np.ndarray, weights: MixingWeights, t: float = 0.0) -> PEstimate:
    """Closed-form least-squares ``p`` for a run started in ``|0><0|``.

    The model output is ``diag(1 - q, q)`` with ``q = (x1 + x2) p``, so the
    Frobenius-optimal ``q`` is the excited-state population.
    """
    flip = weights.x1 + weights.x2
    if flip <= 0:
        raise NonIdentifiableError("p is not identifiable when only Lambda_3 is mixed in")
    rho = np.asarray(rho_meas, dtype=complex)
    p_hat = min(max(rho[1, 1].real / flip, 0.0), P_MAX)
    q = flip * p_hat
    model = np.diag([1 - q, q]).astype(complex)
    return PEstimate(float(t), float(p_hat), float(np.linalg.norm(rho - model)))


def _p_model(c: float, t: np.ndarray) -> np.ndarray:
    return -np.expm1(-c * t) / 2


@dataclass(frozen=True)
class FitResult:
    c_hat: float
    rss: float
    n_points: int

    @property
    def decoherence(self) -> DecoherenceFunction:
        return DecoherenceFunction(self.c_hat)

    def p(self, t):
        return _p_model(self.c_hat, np.asarray(t, dtype=float))

    def pdot(self, t):
        return self.c_hat / 2 * np.exp(-self.c_hat * np.asarray(t, dtype=float))


def fit_c(points: Sequence[PEstimate], bracket: tuple[float, float] = C_BRACKET,
          xtol: float = 1e-12) -> FitResult:
    """Least-squares fit of ``c`` to the point estimates.

    A log-spaced scan brackets the minimum, golden-section search narrows it
    and a single Newton step polishes the result.
    """
    t = np.array([pt.t for pt in points], dtype=float)
    y = np.array([pt.p_hat for pt in points], dtype=float)
    if len(t) < 3 or len(np.unique(t)) < 3:
        raise FitError(f"need at least 3 distinct times, got {len(np.unique(t))}")
    if np.all(y == 0):
        raise FitError("all p estimates are zero; c cannot be fitted")

    def rss(c: float) -> float:
        r = y - _p_model(c, t)
        return float(r @ r)

    lo, hi = bracket
    scan = np.geomspace(lo, hi, 241)
    vals = [rss(c) for c in scan]
    k = int(np.argmin(vals))
    a = scan[max(k - 1, 0)]
    b = scan[min(k + 1, len(scan) - 1)]

    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = rss(x1), rss(x2)
    while b - a > xtol * max(1.0, abs(a)):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = rss(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = rss(x2)
    c = 0.5 * (a + b)

    # Newton polish on d(rss)/dc = 0
    e = np.exp(-c * t)
    r = y - _p_model(c, t)
    dp = t * e / 2
    d2p = -t * t * e / 2
    grad = -2 * np.sum(r * dp)
    hess = 2 * np.sum(dp * dp - r * d2p)
    if hess > 0:
        c_new = c - grad / hess
        if lo <= c_new <= hi and rss(c_new) <= rss(c):
            c = c_new
    return FitResult(float(c), rss(c), len(t))


def experimental_rates(fit: FitResult, weights: MixingWeights,
                       grid: Sequence[float]) -> RateTrajectory:
    return trajectory_on(PauliMixture(weights, fit.decoherence), grid)


def classify_experiment(traj: RateTrajectory, tol: float = DEFAULT_TOL) -> MarkovClass:
    return classify(traj, tol)


@dataclass(frozen=True)
class PipelineResult:
    mixture: PauliMixture
    points: list[ExperimentPoint]
    estimates: list[PEstimate]
    fit: FitResult
    fitted: RateTrajectory
    theory: RateTrajectory
    fitted_class: MarkovClass
    theory_class: MarkovClass


def run_pipeline(m: PauliMixture, grid: Sequence[float], nm: NoiseModel,
                 analysis_grid: Sequence[float] | None = None,
                 tol: float = DEFAULT_TOL) -> PipelineResult:
    """Synthetic experiment followed by the full analysis chain."""
    if analysis_grid is None:
        analysis_grid = uniform_grid(*DEFAULT_GRID)
    points = synthetic_experiment(m, grid, nm)
    estimates = [estimate_p(pt.state, m.weights, pt.t) for pt in points]
    fit = fit_c(estimates)
    fitted = experimental_rates(fit, m.weights, analysis_grid)
    theory = trajectory_on(m, analysis_grid)
    return PipelineResult(m, points, estimates, fit, fitted, theory,
                          classify_experiment(fitted, tol), classify(theory, tol))
