import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paulimix.channels import (PRESETS, DecoherenceFunction, MixingWeights, PauliMixture,
                               mixture_ptm)
from paulimix.divisibility import (MarkovClass, RateTrajectory, Verdict, Witness, blp_monitor,
                                   choi_margins, classify, decay_rates, pauli_choi_matrix,
                                   propagator_cp_check, rate_trajectory, sign_change_time,
                                   trajectory_on, two_mix_gamma1)
from paulimix.qmath import I2, KET0, KET1

from conftest import weights

F2 = DecoherenceFunction(2.0)


def fd_rates(m, t, h=1e-5):
    """Rates from the transfer eigenvalues: gamma_i = 1/4 d/dt[-ln(l_j l_k / l_i)]."""
    def phi(s, i):
        lam = mixture_ptm(m, s)
        j, k = [a for a in range(3) if a != i]
        return -math.log(lam[j] * lam[k] / lam[i])
    return [(phi(t + h, i) - phi(t - h, i)) / (2 * h) / 4 for i in range(3)]


def test_decay_rate_examples():
    r = decay_rates(PRESETS["fig4"], 0.0)
    assert r.as_array() == pytest.approx([0.5, 0.5, 0.5], abs=1e-12)
    m = PauliMixture(MixingWeights(0, 0.5, 0.5), F2)
    assert decay_rates(m, 0.0).as_array() == pytest.approx([0, 0.5, 0.5], abs=1e-12)
    # frozen from the finite-difference oracle below
    assert decay_rates(m, 0.5).gamma1 == pytest.approx(-0.23105857863, abs=1e-10)
    assert fd_rates(m, 0.5)[0] == pytest.approx(-0.23105857863, abs=1e-8)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_rates_match_finite_differences(name):
    m = PRESETS[name]
    for t in np.linspace(0.01, 1.5, 30):
        assert np.allclose(decay_rates(m, t).as_array(), fd_rates(m, t), atol=1e-5)


@settings(max_examples=30)
@given(weights(), st.floats(0.01, 1.5))
def test_rates_match_finite_differences_random(w, t):
    m = PauliMixture(w, DecoherenceFunction(3.0))
    assert np.allclose(decay_rates(m, t).as_array(), fd_rates(m, t), atol=1e-5)


@settings(max_examples=50)
@given(weights(), st.floats(0, 3))
def test_rate_sum_matches_generator_trace(w, t):
    # gamma_1 + gamma_2 + gamma_3 = (g_1 + g_2 + g_3) pdot / 2 >= 0
    m = PauliMixture(w, F2)
    p, pdot = m.p(t), m.pdot(t)
    g = [(1 - x) / (1 - 2 * (1 - x) * p) for x in w]
    r = decay_rates(m, t)
    assert r.gamma1 + r.gamma2 + r.gamma3 == pytest.approx(sum(g) * pdot / 2, abs=1e-12)
    assert r.gamma1 + r.gamma2 + r.gamma3 >= 0


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_rates_at_zero(name):
    m = PRESETS[name]
    x = list(m.weights)
    r = decay_rates(m, 0.0)
    for i in range(3):
        j, k = [a for a in range(3) if a != i]
        expect = ((1 - x[j]) + (1 - x[k]) - (1 - x[i])) * m.pdot(0) / 2
        assert r.as_array()[i] == pytest.approx(expect, abs=1e-12)


def test_two_mix_gamma1_examples():
    assert two_mix_gamma1(0.5, F2, 0.0) == 0
    for a in (0.25, 0.5):
        for t in (0.01, 0.3, 1.0, 1.5, 5.0):
            assert two_mix_gamma1(a, F2, t) < 0
    m = PauliMixture(MixingWeights.two_mix(0.25), F2)
    assert two_mix_gamma1(0.25, F2, 0.5) == pytest.approx(decay_rates(m, 0.5).gamma1, abs=1e-12)


@pytest.mark.parametrize("name", ["fig2", "fig3"])
def test_two_mix_consistency_on_grid(name):
    m = PRESETS[name]
    for t in np.linspace(0, 1.5, 151):
        assert abs(two_mix_gamma1(m.two_mix_a, m.decoherence, t) - decay_rates(m, t).gamma1) < 1e-12


@settings(max_examples=50)
@given(st.floats(0.001, 0.999), st.floats(0.001, 10), st.floats(0.1, 5))
def test_two_mix_strictly_negative(a, t, c):
    assert two_mix_gamma1(a, DecoherenceFunction(c), t) < 0


def test_rate_trajectory_grid():
    traj = rate_trajectory(PRESETS["fig2"], 0.0, 1.0, 2)
    assert list(traj.grid) == [0.0, 1.0]
    assert len(traj) == 2
    with pytest.raises(ValueError):
        rate_trajectory(PRESETS["fig2"], 1.0, 0.5, 10)
    with pytest.raises(ValueError):
        rate_trajectory(PRESETS["fig2"], 0.0, 1.0, 1)


def test_trajectory_sign_examples():
    g = rate_trajectory(PRESETS["fig2"]).gammas
    assert np.all(g[1:, 0] < 0)
    assert np.all(rate_trajectory(PRESETS["fig5"]).gammas > 0)


def test_classify_presets():
    assert classify(rate_trajectory(PRESETS["fig4"])).verdict is Verdict.MARKOVIAN
    for name in ("fig2", "fig3", "fig6"):
        cls = classify(rate_trajectory(PRESETS[name]))
        assert cls.verdict is Verdict.NON_MARKOVIAN
        assert cls.witness.axis == 1
    assert classify(rate_trajectory(PRESETS["fig6"])).witness.t > 0.5


def test_classify_validation():
    empty = RateTrajectory(PRESETS["fig2"], np.array([]), ())
    with pytest.raises(ValueError):
        classify(empty)
    with pytest.raises(ValueError):
        MarkovClass(Verdict.MARKOVIAN, Witness(0.1, 1))
    with pytest.raises(ValueError):
        MarkovClass(Verdict.NON_MARKOVIAN)


def test_sign_change_fig6():
    # gamma_1 = 0 where 1.2/(1 - 1.2p) = 0.8/(1 - 1.6p), i.e. p = 5/12, t = ln(6)/3
    t_star = sign_change_time(PRESETS["fig6"], 1, 0.0, 1.5)
    assert t_star == pytest.approx(math.log(6) / 3, abs=1e-6)
    with pytest.raises(ValueError):
        sign_change_time(PRESETS["fig4"], 1, 0.0, 1.5)


def test_cp_check_identity_propagator():
    res = propagator_cp_check(PRESETS["fig2"], 0.7, 0.7)
    assert res.is_cp
    assert res.margins == pytest.approx([1, 0, 0, 0], abs=1e-15)


def test_cp_check_examples():
    m = PRESETS["fig4"]
    rng = np.random.default_rng(5)
    for _ in range(50):
        t1, t2 = np.sort(rng.uniform(0, 3, 2))
        assert propagator_cp_check(m, t1, t2).is_cp
    assert not propagator_cp_check(PRESETS["fig2"], 0.5, 0.501).is_cp
    # first-order margin on axis 1 is gamma_1 * dt
    res = propagator_cp_check(PRESETS["fig2"], 0.5, 0.501)
    assert res.margins[1] == pytest.approx(decay_rates(PRESETS["fig2"], 0.5005).gamma1 * 1e-3, rel=1e-2)
    with pytest.raises(ValueError):
        propagator_cp_check(m, 1.0, 0.5)


@settings(max_examples=50)
@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_choi_margins_match_choi_eigenvalues(mu):
    choi = pauli_choi_matrix(mu)
    assert np.allclose(choi, choi.conj().T)
    eig = np.sort(np.linalg.eigvalsh(choi) / 2)
    assert np.allclose(eig, np.sort(choi_margins(mu)), atol=1e-12)


def test_sign_cp_equivalence_presets():
    for m in PRESETS.values():
        _check_sign_cp(m, np.linspace(0, 1.5, 151))


def test_sign_cp_equivalence_random_weights():
    rng = np.random.default_rng(11)
    for _ in range(30):
        m = PauliMixture(MixingWeights(*rng.dirichlet([1, 1, 1])), DecoherenceFunction(3.0))
        _check_sign_cp(m, np.linspace(0, 1.5, 31))


def _check_sign_cp(m, grid, width=1e-3):
    checked = 0
    for t1 in grid:
        inner = trajectory_on(m, np.linspace(t1, t1 + width, 11)).gammas
        keep = np.all(inner > 0, axis=0) | np.all(inner < 0, axis=0)
        if not keep.all():
            continue
        checked += 1
        assert propagator_cp_check(m, t1, t1 + width).is_cp == bool(np.all(inner >= 0))
    return checked


def test_blp_examples():
    grid = np.linspace(0, 1.5, 151)
    m = PRESETS["fig2"]
    assert all(d == 0 for _, d in blp_monitor(m, KET0, KET0, grid))
    dists = [d for _, d in blp_monitor(m, KET0, KET1, grid)]
    # oracle: |lambda_3(t)|
    lam3 = [mixture_ptm(m, t)[2] for t in grid]
    assert np.allclose(dists, lam3, atol=1e-12)
    assert np.all(np.diff(dists) <= 1e-12)
    for pm in PRESETS.values():
        assert all(d < 1e-15 for _, d in blp_monitor(pm, I2 / 2, I2 / 2, grid))


def test_rates_finite_where_p_rounds_to_half():
    m = PRESETS["fig2"]
    assert m.p(40.0) == 0.5
    r = decay_rates(m, 40.0)
    assert np.all(np.isfinite(r.as_array()))
    assert two_mix_gamma1(0.5, m.decoherence, 40.0) < 0
    assert r.gamma1 == pytest.approx(two_mix_gamma1(0.5, m.decoherence, 40.0), rel=1e-12)
