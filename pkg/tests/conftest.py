import sys
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from multialloc import Additive, MultiAllocation, Xos

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pair_max() -> Xos:
    """v(T) = max(|T & {e1,e2}|, |T & {e3,e4}|)."""
    return Xos([[1, 1, 0, 0], [0, 0, 1, 1]])


def tight_instance(d: int):
    """d agents, d - 1 unit items, every item held by every agent."""
    m = d - 1
    everything = (1 << m) - 1
    return MultiAllocation((everything,) * d, m), [Additive([1] * m)] * d


@pytest.fixture
def pm():
    return pair_max()


@pytest.fixture
def add321():
    return Additive([3, 2, 1])


weights = st.integers(min_value=0, max_value=8)


@st.composite
def xos_valuations(draw, min_items=1, max_items=5):
    m = draw(st.integers(min_items, max_items))
    clauses = draw(st.lists(st.lists(weights, min_size=m, max_size=m), min_size=1, max_size=4))
    return m, Xos(clauses)


@st.composite
def additive_valuations(draw, min_items=1, max_items=5):
    m = draw(st.integers(min_items, max_items))
    return m, Additive(draw(st.lists(weights, min_size=m, max_size=m)))


def frac(x) -> Fraction:
    return Fraction(x)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.pytest_terminal_summary_lines():
        terminalreporter.write_line(line)
