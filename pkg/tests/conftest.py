import numpy as np
from hypothesis import settings, strategies as st

from bapkit.graph import BipartiteInstance

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@st.composite
def instances(draw, max_side=5, distinct=False, integer=False, square=False):
    m = draw(st.integers(1, max_side))
    n = m if square else draw(st.integers(1, max_side))
    if integer:
        # a small range forces many ties unless distinct
        values = st.integers(0, 6 if not distinct else 40).map(float)
    else:
        values = st.floats(0, 100, allow_nan=False, allow_infinity=False)
    if distinct:
        flat = draw(st.lists(values, min_size=m * n, max_size=m * n, unique=True))
    else:
        flat = draw(st.lists(values, min_size=m * n, max_size=m * n))
    return BipartiteInstance(np.array(flat, dtype=float).reshape(m, n))


# one line per acceptance criterion, filled by test_acceptance
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
