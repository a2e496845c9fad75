import numpy as np
import pytest
from hypothesis import strategies as st

from pathrisk.paths import PathEnsemble, TimeGrid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_path():
    """Finals {0.2, 0.4}, running minima {-0.1, -0.3}, drawdowns {0.8, 0.2}."""
    values = [[0.0, -0.1, 0.7, -0.1, 0.2],
              [-0.3, -0.1, 0.4, 0.2, 0.4]]
    return PathEnsemble.from_arrays(values)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def ensembles(draw, max_paths=5, max_points=6, min_points=2):
    n = draw(st.integers(1, max_paths))
    m = draw(st.integers(min_points, max_points))
    values = np.array(draw(st.lists(finite, min_size=n * m, max_size=n * m))).reshape(n, m)
    w = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    probs = w / w.sum()
    probs[-1] = 1.0 - probs[:-1].sum()
    return PathEnsemble(TimeGrid(np.arange(m, dtype=float)), values, probs)


@st.composite
def distributions(draw, max_atoms=12):
    n = draw(st.integers(1, max_atoms))
    x = draw(st.lists(finite, min_size=n, max_size=n))
    w = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)))
    w = w / w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return np.array(x), w
