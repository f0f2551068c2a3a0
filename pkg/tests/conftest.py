import numpy as np
import pytest
from hypothesis import strategies as st

from mnar_bounds import CausalModel, example_model, observed_law


@pytest.fixture
def model():
    return example_model()


@pytest.fixture
def law(model):
    return observed_law(model)


_prob = st.floats(0.02, 0.98)


@st.composite
def models(draw, k=None, missingness="mnar"):
    """Valid causal models with interior parameters."""
    k = k or draw(st.integers(2, 5))
    weights = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k)))
    p_u = weights / weights.sum()
    p_e1 = draw(st.lists(_prob, min_size=k, max_size=k))
    p_d1 = [draw(st.lists(_prob, min_size=k, max_size=k)) for _ in range(2)]
    if missingness == "mnar":
        p_r1 = [draw(st.lists(_prob, min_size=k, max_size=k)) for _ in range(2)]
    elif missingness == "mar":
        p_r1 = [[draw(_prob)] * k for _ in range(2)]
    elif missingness == "mcar":
        p_r1 = [[draw(_prob)] * k] * 2
    else:  # no missing confounder at all
        p_r1 = [[0.0] * k] * 2
    return CausalModel(p_u, p_e1, p_d1, p_r1)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
