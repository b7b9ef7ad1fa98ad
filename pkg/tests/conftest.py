import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from rank2_lseries.poly import PolyA  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRIMES = (3, 5, 7)


@st.composite
def polys(draw, q=None, max_degree=4, nonzero=False):
    q = q if q is not None else draw(st.sampled_from(PRIMES))
    coeffs = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=max_degree + 1))
    f = PolyA(coeffs, q)
    if nonzero and f.is_zero():
        f = PolyA.one(q)
    return f


@st.composite
def constant_pairs(draw, q=None):
    q = q if q is not None else draw(st.sampled_from(PRIMES))
    return q, draw(st.integers(0, q - 1)), draw(st.integers(1, q - 1))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
