"""Dense linear-algebra helpers for one- and three-qubit states.

States are plain ``numpy`` complex arrays. Three-qubit operators use the
ordering system (x) ancilla_1 (x) ancilla_2, i.e. basis index
``4*s + 2*a1 + a2`` with the system qubit as the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VALIDITY_TOL = 1e-10
IDENTITY_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA = (
    I2,
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

KET0 = np.array([[1, 0], [0, 0]], dtype=complex)
KET1 = np.array([[0, 0], [0, 1]], dtype=complex)


class InvalidStateError(ValueError):
    """Raised when a matrix fails the density-matrix checks."""


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of the arguments, left to right."""
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def is_density_matrix(rho: np.ndarray, tol: float = VALIDITY_TOL) -> bool:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - dagger(rho))) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh((rho + dagger(rho)) / 2).min() >= -tol)


def check_density_matrix(rho: np.ndarray, dim: int | None = None,
                         tol: float = VALIDITY_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if dim is not None and rho.shape != (dim, dim):
        raise InvalidStateError(f"expected a {dim}x{dim} state, got shape {rho.shape}")
    if not is_density_matrix(rho, tol):
        raise InvalidStateError("matrix is not Hermitian, trace-one and positive semidefinite")
    return rho


def partial_trace_ancilla(rho: np.ndarray) -> np.ndarray:
    """Trace the two ancilla qubits out of an 8x8 system-ancilla operator.

    ``out[i, j] = sum_k rho[4i + k, 4j + k]``.
    """
    rho = np.asarray(rho)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 operator, got shape {rho.shape}")
    return np.einsum("ikjk->ij", rho.reshape(2, 4, 2, 4))


def fidelity(chi_expt: np.ndarray, chi_theo: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt overlap of two matrices.

    F = |Tr(A B^dag)| / sqrt(Tr(A^dag A) Tr(B^dag B)). This is the figure of
    merit customarily quoted for NMR tomography, not the Uhlmann fidelity.
    """
    a = np.asarray(chi_expt, dtype=complex)
    b = np.asarray(chi_theo, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.vdot(a, a).real
    nb = np.vdot(b, b).real
    if na == 0 or nb == 0:
        raise ValueError("fidelity is undefined for a zero matrix")
    # vdot(b, a) = Tr(b^dag a) = conj(Tr(a b^dag))
    return float(min(1.0, abs(np.vdot(b, a)) / np.sqrt(na * nb)))


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    rho1 = np.asarray(rho1)
    rho2 = np.asarray(rho2)
    if rho1.shape != rho2.shape:
        raise ValueError(f"shape mismatch: {rho1.shape} vs {rho2.shape}")
    diff = rho1 - rho2
    return float(0.5 * np.abs(np.linalg.eigvalsh((diff + dagger(diff)) / 2)).sum())


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a real vector onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def nearest_density_matrix(h: np.ndarray) -> np.ndarray:
    """Closest trace-one PSD matrix to ``h`` in Frobenius norm.

    The input is symmetrized first; the eigenvalues are then projected onto the
    probability simplex while the eigenvectors are kept.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    h = (h + dagger(h)) / 2
    w, v = np.linalg.eigh(h)
    w = project_to_simplex(w)
    out = (v * w) @ dagger(v)
    return (out + dagger(out)) / 2


@dataclass(frozen=True)
class BlochVector:
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        if self.r1**2 + self.r2**2 + self.r3**2 > 1 + VALIDITY_TOL:
            raise InvalidStateError("Bloch vector lies outside the unit ball")

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "BlochVector":
        rho = np.asarray(rho)
        r = [float(np.trace(rho @ SIGMA[i]).real) for i in (1, 2, 3)]
        return cls(*r)

    def to_matrix(self) -> np.ndarray:
        return (I2 + self.r1 * SIGMA[1] + self.r2 * SIGMA[2] + self.r3 * SIGMA[3]) / 2

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3])


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from the induced (Ginibre) measure; ``rank=1`` gives pure states."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    rho /= np.trace(rho).real
    return (rho + dagger(rho)) / 2
