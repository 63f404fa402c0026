import numpy as np
import pytest
from hypothesis import strategies as st

from qutrit_kak.cartan import CartanPair, EulerConvention, SequenceParams

ACCEPTANCE_LINES = []

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)
times = st.floats(0, 2 * np.pi, allow_nan=False)
reals = st.floats(-3, 3, allow_nan=False)


@st.composite
def hermitian(draw):
    re = np.array(draw(st.lists(reals, min_size=9, max_size=9))).reshape(3, 3)
    im = np.array(draw(st.lists(reals, min_size=9, max_size=9))).reshape(3, 3)
    a = re + 1j * im
    return (a + a.conj().T) / 2


@st.composite
def sequence_params(draw, pair=None):
    a = draw(st.lists(angles, min_size=6, max_size=6))
    return SequenceParams.from_vector(
        a, draw(times), draw(times),
        draw(st.sampled_from(list(EulerConvention))),
        pair or draw(st.sampled_from(list(CartanPair))),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
