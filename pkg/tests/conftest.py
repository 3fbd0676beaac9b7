import numpy as np
import pytest
from hypothesis import strategies as st

from paulimix.channels import MixingWeights
from paulimix.qmath import random_density_matrix

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_states(rng, n, dim=2):
    return [random_density_matrix(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(n)]


@st.composite
def weights(draw, min_value=0.0):
    a = draw(st.floats(min_value, 1.0))
    b = draw(st.floats(min_value, 1.0))
    c = draw(st.floats(min_value, 1.0))
    s = a + b + c
    if s == 0:
        return MixingWeights(1 / 3, 1 / 3, 1 - 2 / 3)
    x1, x2 = a / s, b / s
    x3 = max(0.0, 1.0 - x1 - x2)
    return MixingWeights(x1, x2, x3)


@st.composite
def density_matrices(draw, dim=2):
    seed = draw(st.integers(0, 2**32 - 1))
    rank = draw(st.integers(1, dim))
    return random_density_matrix(dim, np.random.default_rng(seed), rank=rank)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        ACCEPTANCE_LINES.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE_LINES:
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{tag}] {name}")
