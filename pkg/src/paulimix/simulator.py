"""Software stand-in for the three-qubit experiment.

Pipeline per time point: build the dilation circuit, evolve
``rho_0 (x) |00><00|``, read out every Pauli expectation value with optional
Gaussian noise, reconstruct the three-qubit state and trace out the ancillas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .channels import PauliMixture, mixture_apply
from .dilation import DilationCircuit, circuit_for
from .qmath import (KET0, SIGMA, check_density_matrix, dagger, fidelity,
                    nearest_density_matrix, partial_trace_ancilla, tensor)

PAULI_CHARS = "IXYZ"
DEFAULT_SIGMA = 0.02
DEFAULT_GRID = (0.1, 1.5, 15)

ANCILLA_00 = np.zeros((4, 4), dtype=complex)
ANCILLA_00[0, 0] = 1


class MissingObservableError(KeyError):
    pass


@lru_cache(maxsize=None)
def pauli_labels(n_qubits: int) -> tuple[str, ...]:
    """All non-identity Pauli strings on ``n_qubits``, system qubit first."""
    labels = ("".join(c) for c in itertools.product(PAULI_CHARS, repeat=n_qubits))
    return tuple(lab for lab in labels if set(lab) != {"I"})


@lru_cache(maxsize=None)
def pauli_operator(label: str) -> np.ndarray:
    op = tensor(*(SIGMA[PAULI_CHARS.index(ch)] for ch in label))
    op.setflags(write=False)
    return op


def _n_qubits(dim: int) -> int:
    n = {2: 1, 8: 3}.get(dim)
    if n is None:
        raise ValueError(f"only 1- and 3-qubit states are supported, got dimension {dim}")
    return n


@dataclass(frozen=True)
class NoiseModel:
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"noise sigma must be non-negative, got {self.sigma}")


@dataclass(frozen=True)
class MeasurementRecord:
    n_qubits: int
    expectations: Mapping[str, float]

    def missing(self) -> list[str]:
        return [lab for lab in pauli_labels(self.n_qubits) if lab not in self.expectations]


@dataclass(frozen=True)
class TomographyResult:
    state: np.ndarray
    fidelity_to_target: float | None = None


def run_dilation_full(circ: DilationCircuit, rho_s: np.ndarray) -> np.ndarray:
    """Three-qubit output ``T (rho_s (x) |00><00|) T^dag``."""
    rho_s = check_density_matrix(rho_s, 2)
    total = circ.total
    return total @ tensor(rho_s, ANCILLA_00) @ dagger(total)


def run_dilation(circ: DilationCircuit, rho_s: np.ndarray) -> np.ndarray:
    return partial_trace_ancilla(run_dilation_full(circ, rho_s))


def pauli_expectations(rho: np.ndarray) -> MeasurementRecord:
    rho = check_density_matrix(rho)
    n = _n_qubits(rho.shape[0])
    # Tr(rho P) = sum_ij rho_ij P_ji
    exps = {lab: float(np.sum(rho * pauli_operator(lab).T).real) for lab in pauli_labels(n)}
    return MeasurementRecord(n, exps)


def _label_rng(seed: int, stream: int, label: str) -> np.random.Generator:
    key = (stream, *(PAULI_CHARS.index(ch) for ch in label))
    return np.random.default_rng(np.random.SeedSequence(seed & (2**64 - 1), spawn_key=key))


def add_noise(rec: MeasurementRecord, nm: NoiseModel, stream: int = 0) -> MeasurementRecord:
    """Perturb every expectation with its own N(0, sigma^2) draw.

    Each draw comes from a generator keyed by ``(seed, stream, label)``, so the
    result does not depend on evaluation order. ``stream`` is typically the
    time-point index.
    """
    if nm.sigma == 0:
        return rec
    noisy = {lab: val + nm.sigma * _label_rng(nm.seed, stream, lab).standard_normal()
             for lab, val in rec.expectations.items()}
    return MeasurementRecord(rec.n_qubits, noisy)


def linear_inversion(rec: MeasurementRecord) -> np.ndarray:
    missing = rec.missing()
    if missing:
        raise MissingObservableError(f"record lacks {len(missing)} observables, e.g. {missing[:3]}")
    dim = 2 ** rec.n_qubits
    rho = np.eye(dim, dtype=complex)
    for lab in pauli_labels(rec.n_qubits):
        rho = rho + rec.expectations[lab] * pauli_operator(lab)
    return rho / dim


def tomo_reconstruct(rec: MeasurementRecord, target: np.ndarray | None = None) -> TomographyResult:
    """Least-squares state estimate: linear inversion, then projection onto valid states."""
    state = nearest_density_matrix(linear_inversion(rec))
    fid = fidelity(state, target) if target is not None else None
    return TomographyResult(state, fid)


@dataclass(frozen=True)
class ExperimentPoint:
    t: float
    system: TomographyResult
    full: TomographyResult

    @property
    def state(self) -> np.ndarray:
        return self.system.state


def synthetic_experiment(m: PauliMixture, grid: Sequence[float], nm: NoiseModel,
                         rho0: np.ndarray = KET0) -> list[ExperimentPoint]:
    """Simulated tomography of the dilated dynamics at every time in ``grid``.

    Fidelities are taken against the ideal three-qubit output and against the
    analytic mixture output for the system qubit.
    """
    grid = [float(t) for t in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("time grid must be strictly increasing")
    rho0 = check_density_matrix(rho0, 2)
    points = []
    for idx, t in enumerate(grid):
        circ = circuit_for(m, t)
        ideal = run_dilation_full(circ, rho0)
        rec = add_noise(pauli_expectations(ideal), nm, stream=idx)
        full = tomo_reconstruct(rec, target=ideal)
        sys_state = partial_trace_ancilla(full.state)
        sys_fid = fidelity(sys_state, mixture_apply(m, rho0, t))
        points.append(ExperimentPoint(t, TomographyResult(sys_state, sys_fid), full))
    return points
