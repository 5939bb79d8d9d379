import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gapkit.curve import GapSet

settings.register_profile(
    "gapkit",
    max_examples=15,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("gapkit")


@st.composite
def gapsets(draw, n_min=1, n_max=3):
    """Alternating band/gap lengths in [0.3, 1.5], first band in [0.2, 1]."""
    n = draw(st.integers(n_min, n_max))
    lengths = st.floats(0.3, 1.5)
    x = draw(st.floats(0.2, 1.0))
    gaps = []
    for _ in range(n):
        g = draw(lengths)
        gaps.append((x, x + g))
        x += g + draw(lengths)
    return GapSet(tuple(gaps))


@st.composite
def divisors(draw, gs_strategy=None):
    from gapkit.divisor import Divisor

    gs = draw(gs_strategy if gs_strategy is not None else gapsets())
    entries = []
    for a, b in gs.gaps:
        t = draw(st.floats(0.05, 0.95))
        entries.append((a + (b - a) * t, draw(st.sampled_from([-1, 1]))))
    return Divisor(gs, tuple(entries))


@pytest.fixture
def rng():
    return np.random.default_rng(20211014)


@pytest.fixture
def one_gap():
    return GapSet(((1.0, 2.0),))


@pytest.fixture
def three_gap():
    return GapSet(((6.0, 6.7), (3.0, 4.5), (1.0, 2.0)))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def record_criterion(number, ok, text):
    ACCEPTANCE_LINES[number] = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {text}"
    print(ACCEPTANCE_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
