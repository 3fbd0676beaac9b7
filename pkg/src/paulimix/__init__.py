"""Convex mixtures of Pauli semigroups: dilation, simulation and Markovianity checks."""

from .channels import (PRESETS, DecoherenceFunction, MixingWeights, PauliMixture, mixture_apply,
                       mixture_kraus, mixture_ptm, preset)
from .divisibility import (MarkovClass, Verdict, classify, decay_rates, propagator_cp_check,
                           rate_trajectory)

__all__ = [
    "PRESETS", "DecoherenceFunction", "MixingWeights", "PauliMixture", "mixture_apply",
    "mixture_kraus", "mixture_ptm", "preset", "MarkovClass", "Verdict", "classify",
    "decay_rates", "propagator_cp_check", "rate_trajectory",
]
