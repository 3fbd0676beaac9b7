"""Pauli semigroups and their convex mixtures.

Each semigroup acts as ``rho -> (1 - p) rho + p s_i rho s_i`` with the
decoherence function ``p(t) = (1 - exp(-c t)) / 2``. A mixture with weights
``x`` is diagonal in the Pauli basis with eigenvalues
``lambda_i = 1 - 2 p (1 - x_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qmath import IDENTITY_TOL, SIGMA, VALIDITY_TOL, check_density_matrix, dagger

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class DecoherenceFunction:
    c: float

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"decoherence rate c must be positive, got {self.c}")


def _check_time(t: float) -> None:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")


def p_of_t(f: DecoherenceFunction, t: float) -> float:
    _check_time(t)
    # expm1 keeps small-t values accurate
    return -math.expm1(-f.c * t) / 2


def pdot_of_t(f: DecoherenceFunction, t: float) -> float:
    _check_time(t)
    return f.c / 2 * math.exp(-f.c * t)


@dataclass(frozen=True)
class MixingWeights:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ("x1", "x2", "x3"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"weight {name}={v} is outside [0, 1]")
        total = self.x1 + self.x2 + self.x3
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")

    @classmethod
    def two_mix(cls, a: float) -> "MixingWeights":
        """Weights of ``a*Lambda_3 + (1 - a)*Lambda_2``."""
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"two-way mixing parameter a={a} is outside [0, 1]")
        return cls(0.0, 1.0 - a, a)

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    def __getitem__(self, axis: int) -> float:
        """1-based access matching the Pauli axis labels."""
        return (self.x1, self.x2, self.x3)[axis - 1]


@dataclass(frozen=True)
class PauliMixture:
    weights: MixingWeights
    decoherence: DecoherenceFunction

    @classmethod
    def of(cls, weights, c: float) -> "PauliMixture":
        if not isinstance(weights, MixingWeights):
            weights = MixingWeights(*weights)
        return cls(weights, DecoherenceFunction(c))

    def p(self, t: float) -> float:
        return p_of_t(self.decoherence, t)

    def pdot(self, t: float) -> float:
        return pdot_of_t(self.decoherence, t)

    @property
    def two_mix_a(self) -> float | None:
        """The ``a`` of a two-way (Lambda_2, Lambda_3) mixture, else None."""
        return self.weights.x3 if self.weights.x1 == 0.0 else None


class PauliTransferDiagonal(NamedTuple):
    lambda1: float
    lambda2: float
    lambda3: float


@dataclass(frozen=True)
class KrausSet:
    operators: tuple

    def __post_init__(self):
        total = sum(dagger(e) @ e for e in self.operators)
        if np.max(np.abs(total - np.eye(2))) > VALIDITY_TOL:
            raise ValueError("Kraus operators are not trace preserving")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(e @ rho @ dagger(e) for e in self.operators)

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)


def _check_axis(axis: int) -> None:
    if axis not in (1, 2, 3):
        raise ValueError(f"Pauli axis must be 1, 2 or 3, got {axis}")


def dephase(axis: int, p: float, rho: np.ndarray) -> np.ndarray:
    """Single-axis Pauli channel at a fixed weight ``p``."""
    s = SIGMA[axis]
    return (1 - p) * rho + p * (s @ rho @ s)


def apply_semigroup(axis: int, f: DecoherenceFunction, rho: np.ndarray, t: float) -> np.ndarray:
    _check_axis(axis)
    rho = check_density_matrix(rho, 2)
    return dephase(axis, p_of_t(f, t), rho)


def mixture_apply(m: PauliMixture, rho: np.ndarray, t: float) -> np.ndarray:
    rho = check_density_matrix(rho, 2)
    p = m.p(t)
    return sum(x * dephase(i, p, rho) for i, x in enumerate(m.weights, start=1))


def kraus_weights(weights: MixingWeights, p: float) -> np.ndarray:
    """Probabilities ``(1 - p, x1 p, x2 p, x3 p)`` of the four Pauli branches."""
    return np.array([1 - p, weights.x1 * p, weights.x2 * p, weights.x3 * p])


def mixture_kraus(m: PauliMixture, t: float) -> KrausSet:
    amps = np.sqrt(kraus_weights(m.weights, m.p(t)))
    return KrausSet(tuple(a * s for a, s in zip(amps, SIGMA)))


def ptm_at_p(weights: MixingWeights, p: float) -> PauliTransferDiagonal:
    return PauliTransferDiagonal(*(1 - 2 * p * (1 - x) for x in weights))


def mixture_ptm(m: PauliMixture, t: float) -> PauliTransferDiagonal:
    return ptm_at_p(m.weights, m.p(t))


def ptm_apply(ptm: PauliTransferDiagonal, rho: np.ndarray) -> np.ndarray:
    """Act with a diagonal Pauli transfer map through the Bloch vector."""
    rho = np.asarray(rho, dtype=complex)
    out = np.trace(rho) * SIGMA[0] / 2
    for lam, s in zip(ptm, SIGMA[1:]):
        out = out + lam * np.trace(rho @ s) * s / 2
    return out


# Mixtures studied in the NMR experiments. The nominal 0.33 weights are
# normalized to exact thirds.
PRESETS: dict[str, PauliMixture] = {
    "fig2": PauliMixture(MixingWeights.two_mix(0.5), DecoherenceFunction(2.0)),
    "fig3": PauliMixture(MixingWeights.two_mix(0.25), DecoherenceFunction(2.0)),
    "fig4": PauliMixture(MixingWeights(1 / 3, 1 / 3, 1 - 2 / 3), DecoherenceFunction(3.0)),
    "fig5": PauliMixture(MixingWeights(0.3, 0.4, 0.3), DecoherenceFunction(3.0)),
    "fig6": PauliMixture(MixingWeights(0.2, 0.4, 0.4), DecoherenceFunction(3.0)),
}


def preset(name: str) -> PauliMixture:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


__all__ = [
    "DecoherenceFunction", "MixingWeights", "PauliMixture", "KrausSet",
    "PauliTransferDiagonal", "p_of_t", "pdot_of_t", "apply_semigroup",
    "mixture_apply", "mixture_kraus", "mixture_ptm", "ptm_apply", "ptm_at_p",
    "kraus_weights", "dephase", "PRESETS", "preset", "IDENTITY_TOL",
]
