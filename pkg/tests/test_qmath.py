import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paulimix.qmath import (I2, KET0, KET1, SIGMA, BlochVector, InvalidStateError,
                            check_density_matrix, fidelity, is_density_matrix,
                            nearest_density_matrix, partial_trace_ancilla, project_to_simplex,
                            random_density_matrix, tensor, trace_distance)

from conftest import density_matrices


def kron_by_index(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def ptrace_by_loop(rho):
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(4):
                out[i, j] += rho[4 * i + k, 4 * j + k]
    return out


def test_tensor_identity():
    assert np.array_equal(tensor(I2, I2), np.eye(4))


def test_tensor_sigma1_ket0_matches_index_formula():
    got = tensor(SIGMA[1], KET0)
    assert np.array_equal(got, kron_by_index(SIGMA[1], KET0))
    # sigma_1 sits off-diagonal: only (0,2) and (2,0) survive the |0><0| factor
    assert got[0, 2] == 1 and got[2, 0] == 1
    assert np.count_nonzero(got) == 2


def test_tensor_zz_eigenvector():
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(tensor(SIGMA[3], SIGMA[3]) @ ket00, ket00)


@given(st.lists(st.integers(-5, 5), min_size=12, max_size=12))
def test_tensor_associative_on_integers(vals):
    a = np.array(vals[:4]).reshape(2, 2)
    b = np.array(vals[4:8]).reshape(2, 2)
    c = np.array(vals[8:]).reshape(2, 2)
    assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))


def test_partial_trace_product_state(rng):
    rho = random_density_matrix(2, rng)
    anc = np.zeros((4, 4))
    anc[0, 0] = 1
    assert np.allclose(partial_trace_ancilla(tensor(rho, anc)), rho, atol=1e-12)


def test_partial_trace_maximally_mixed():
    assert np.allclose(partial_trace_ancilla(np.eye(8) / 8), I2 / 2, atol=1e-15)


def test_partial_trace_ghz():
    psi = np.zeros(8)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    ghz = np.outer(psi, psi)
    assert np.allclose(partial_trace_ancilla(ghz), ptrace_by_loop(ghz))
    assert np.allclose(partial_trace_ancilla(ghz), I2 / 2, atol=1e-15)


def test_partial_trace_rejects_wrong_shape():
    with pytest.raises(ValueError):
        partial_trace_ancilla(np.eye(4) / 4)


@settings(max_examples=50)
@given(density_matrices(2), density_matrices(4))
def test_partial_trace_recovers_system(rho_s, anc):
    out = partial_trace_ancilla(tensor(rho_s, anc))
    assert np.max(np.abs(out - rho_s)) < 1e-12
    assert abs(np.trace(out) - 1) < 1e-12


def test_partial_trace_loop_oracle_random(rng):
    rho = random_density_matrix(8, rng)
    assert np.allclose(partial_trace_ancilla(rho), ptrace_by_loop(rho), atol=1e-15)


def test_fidelity_examples():
    rho = random_density_matrix(2, np.random.default_rng(1))
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-14)
    assert fidelity(KET0, KET1) == 0.0
    # Tr(|0><0| I/2) = 1/2 ; sqrt(1 * 1/2)
    assert fidelity(KET0, I2 / 2) == pytest.approx(1 / math.sqrt(2), abs=1e-14)


def test_fidelity_zero_matrix_raises():
    with pytest.raises(ValueError):
        fidelity(np.zeros((2, 2)), KET0)


@settings(max_examples=50)
@given(density_matrices(2), density_matrices(2), st.floats(0.1, 10))
def test_fidelity_symmetric_and_scale_invariant(a, b, s):
    f = fidelity(a, b)
    assert f == pytest.approx(fidelity(b, a), abs=1e-12)
    assert f == pytest.approx(fidelity(s * a, b), abs=1e-12)
    assert 0 <= f <= 1


def test_trace_distance_examples():
    assert trace_distance(KET0, KET0) == 0
    assert trace_distance(KET0, KET1) == pytest.approx(1.0)
    # difference diag(1/2, -1/2): eigenvalues +-1/2
    assert trace_distance(KET0, I2 / 2) == pytest.approx(0.5, abs=1e-15)


def test_trace_distance_bloch_formula(rng):
    # for qubits the trace distance is half the Euclidean Bloch distance
    for _ in range(20):
        a, b = random_density_matrix(2, rng), random_density_matrix(2, rng)
        ra, rb = BlochVector.from_matrix(a).as_array(), BlochVector.from_matrix(b).as_array()
        assert trace_distance(a, b) == pytest.approx(np.linalg.norm(ra - rb) / 2, abs=1e-12)


def test_trace_distance_triangle(rng):
    for _ in range(200):
        dim = 2 if rng.random() < 0.5 else 8
        a, b, c = (random_density_matrix(dim, rng) for _ in range(3))
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10


def test_simplex_projection_example():
    assert np.allclose(project_to_simplex([1.2, -0.2]), [1.0, 0.0])
    assert np.allclose(project_to_simplex([0.5, 0.5]), [0.5, 0.5])


def test_simplex_projection_against_bruteforce(rng):
    # minimize |w - v| over a fine 1-D simplex grid for 2-vectors
    grid = np.linspace(0, 1, 200001)
    for _ in range(20):
        v = rng.normal(size=2)
        cand = np.stack([grid, 1 - grid], axis=1)
        best = cand[np.argmin(np.sum((cand - v) ** 2, axis=1))]
        assert np.allclose(project_to_simplex(v), best, atol=1e-5)


def test_nearest_density_matrix_examples(rng):
    rho = random_density_matrix(8, rng)
    assert np.max(np.abs(nearest_density_matrix(rho) - rho)) < 1e-12
    assert np.allclose(nearest_density_matrix(np.diag([1.2, -0.2])), np.diag([1.0, 0.0]), atol=1e-15)
    assert np.allclose(nearest_density_matrix(0.5 * I2), I2 / 2, atol=1e-15)


def test_nearest_density_matrix_is_closest(rng):
    for dim in (2, 8):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = (g + g.conj().T) / 4 + np.eye(dim) / dim
        proj = nearest_density_matrix(h)
        assert is_density_matrix(proj)
        d = np.linalg.norm(proj - h)
        for _ in range(100):
            other = random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1)))
            assert d <= np.linalg.norm(other - h) + 1e-12


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_nearest_density_matrix_always_valid(seed):
    r = np.random.default_rng(seed)
    g = r.normal(size=(8, 8)) + 1j * r.normal(size=(8, 8))
    out = nearest_density_matrix(g)
    assert is_density_matrix(out)


def test_check_density_matrix_rejects():
    with pytest.raises(InvalidStateError):
        check_density_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidStateError):
        check_density_matrix(I2)
    with pytest.raises(InvalidStateError):
        check_density_matrix(KET0, dim=8)


def test_bloch_round_trip(rng):
    rho = random_density_matrix(2, rng)
    assert np.allclose(BlochVector.from_matrix(rho).to_matrix(), rho, atol=1e-14)
    with pytest.raises(InvalidStateError):
        BlochVector(1.0, 1.0, 0.0)
