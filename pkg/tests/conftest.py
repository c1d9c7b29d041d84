import numpy as np
import pytest
from hypothesis import strategies as st

from gofcorr import validate_model
from gofcorr.cli import geometric_probs


@st.composite
def models(draw, k_min=2, k_max=10, n_min=5, n_max=50, p_floor=0.02):
    """Random category models with every p_i >= p_floor."""
    k = draw(st.integers(k_min, k_max))
    w = draw(st.lists(st.floats(0.0, 1.0), min_size=k, max_size=k))
    w = np.asarray(w) + 1e-3
    p = p_floor + (1 - p_floor * k) * w / w.sum()
    p = p / p.sum()
    n = draw(st.integers(n_min, n_max))
    return validate_model(p, n)


def random_model(rng, k_range=(2, 10), n_range=(5, 50), p_floor=0.02):
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    w = rng.dirichlet(np.ones(k))
    p = p_floor + (1 - p_floor * k) * w
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    return validate_model(p / p.sum(), n)


@pytest.fixture
def fig2_model():
    return validate_model(geometric_probs(10, 5.0), 12)


@pytest.fixture
def uniform5():
    return validate_model(np.full(5, 0.2), 20)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
