"""Two-ancilla dilation circuit for Pauli mixtures.

The circuit is ``T = (I (x) W) U (I (x) V)`` acting on system (x) ancillas,
started from ``|rho_s> (x) |00>``. ``V`` rotates the ancillas so that
``V|00> = sum_i V_i0 |i>``, ``U`` applies ``s_i`` to the system when the
ancillas read ``i``, and ``W`` is the identity. Tracing out the ancillas leaves
the channel with Kraus operators ``E_k = V_k0 s_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausSet, MixingWeights, PauliMixture, kraus_weights
from .qmath import I2, SIGMA, VALIDITY_TOL, dagger, tensor


class DegenerateMixtureError(ValueError):
    pass


def _check_p(p: float) -> None:
    if not 0.0 <= p < 0.5:
        raise ValueError(f"decoherence weight p={p} is outside [0, 1/2)")


def is_unitary(m: np.ndarray, tol: float = VALIDITY_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))) <= tol)


@dataclass(frozen=True)
class AncillaUnitary:
    matrix: np.ndarray
    kind: str
    params: tuple
    p: float

    def __post_init__(self):
        if not is_unitary(self.matrix):
            raise ValueError(f"{self.kind} ancilla matrix is not unitary")


def build_v_two_mix(a: float, p: float) -> AncillaUnitary:
    """Ancilla rotation for ``a*Lambda_3 + (1 - a)*Lambda_2``."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"mixing parameter a={a} is outside [0, 1]")
    _check_p(p)
    sq = math.sqrt
    v = np.array([
        [sq(1 - p), sq(p), 0, 0],
        [0, 0, 1, 0],
        [sq(p * (1 - a)), -sq((1 - a) * (1 - p)), 0, sq(a)],
        [sq(a * p), -sq(a * (1 - p)), 0, -sq(1 - a)],
    ], dtype=complex)
    return AncillaUnitary(v, "two-mix", (a,), p)


def build_v_three_mix(x: MixingWeights, p: float) -> AncillaUnitary:
    """Ancilla rotation for a mixture of all three semigroups (all weights > 0)."""
    x1, x2, x3 = x
    if x1 <= 0 or x2 <= 0 or x3 <= 0:
        raise DegenerateMixtureError(
            f"three-way rotation needs all weights > 0, got {(x1, x2, x3)}; "
            "use build_v_two_mix when x1 == 0")
    _check_p(p)
    sq = math.sqrt
    r = 1 - x1
    v = np.array([
        [sq(1 - p), sq(p), 0, 0],
        [sq(x1 * p), -sq(x1 * (1 - p)), sq(r), 0],
        [sq(x2 * p), -sq(x2 * (1 - p)), -sq(x1 * x2 / r), sq(x3 / r)],
        # -x2/sqrt(x2 (1-x1)) written in the form that stays finite at x2 = 0
        [sq(x3 * p), -sq(x3 * (1 - p)), -sq(x1 * x3 / r), -sq(x2 / r)],
    ], dtype=complex)
    return AncillaUnitary(v, "three-mix", (x1, x2, x3), p)


def build_v_householder(x: MixingWeights, p: float) -> AncillaUnitary:
    """Any-weights rotation: a Householder reflection with the required first column."""
    _check_p(p)
    col = np.sqrt(kraus_weights(x, p))
    u = np.eye(4)[0] - col
    norm2 = u @ u
    if norm2 < 1e-30:
        v = np.eye(4, dtype=complex)
    else:
        v = (np.eye(4) - 2 * np.outer(u, u) / norm2).astype(complex)
    return AncillaUnitary(v, "householder", tuple(x), p)


def ancilla_unitary_for(m: PauliMixture, t: float) -> AncillaUnitary:
    """Pick the rotation used for ``m`` at time ``t``.

    Two-way mixtures (x1 == 0) and strictly three-way mixtures use the
    closed forms; other boundary weights fall back to a Householder reflection.
    """
    p = m.p(t)
    w = m.weights
    if w.x1 == 0.0:
        return build_v_two_mix(w.x3, p)
    if w.x2 > 0 and w.x3 > 0:
        return build_v_three_mix(w, p)
    return build_v_householder(w, p)


def build_controlled_u() -> np.ndarray:
    """``sum_i s_i (x) |i><i|`` over the ancilla basis 00, 01, 10, 11."""
    u = np.zeros((8, 8), dtype=complex)
    for i, s in enumerate(SIGMA):
        proj = np.zeros((4, 4), dtype=complex)
        proj[i, i] = 1
        u += tensor(s, proj)
    return u


_U = build_controlled_u()
_U.setflags(write=False)


@dataclass(frozen=True)
class DilationCircuit:
    v: AncillaUnitary
    u: np.ndarray = field(default_factory=lambda: _U)
    w: np.ndarray = field(default_factory=lambda: np.eye(4, dtype=complex))

    @property
    def total(self) -> np.ndarray:
        return tensor(I2, self.w) @ self.u @ tensor(I2, self.v.matrix)


def assemble(v: AncillaUnitary) -> DilationCircuit:
    circ = DilationCircuit(v)
    if not is_unitary(circ.total):
        raise ValueError("assembled circuit is not unitary")
    return circ


def circuit_for(m: PauliMixture, t: float) -> DilationCircuit:
    return assemble(ancilla_unitary_for(m, t))


def kraus_from_dilation(circ: DilationCircuit) -> KrausSet:
    """``E_k = sum_i W_ki V_i0 s_i``."""
    col = circ.v.matrix[:, 0]
    ops = []
    for k in range(4):
        ops.append(sum(circ.w[k, i] * col[i] * SIGMA[i] for i in range(4)))
    return KrausSet(tuple(ops))


def kraus_from_total(total: np.ndarray) -> list[np.ndarray]:
    """Blocks ``<s', k| T |s, 00>`` of the full unitary, one 2x2 per ancilla outcome."""
    blocks = np.asarray(total).reshape(2, 4, 2, 4)
    return [blocks[:, k, :, 0] for k in range(4)]
