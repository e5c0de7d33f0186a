from fractions import Fraction

from multialloc import Additive, MultiAllocation
from multialloc.harness.search import exact_d3_slack, search_d3


def test_zero_budget_is_empty():
    rep = search_d3(0)
    assert rep.findings == [] and rep.exhaustive_cases == 0


def test_intro_three_agents_is_not_a_violation():
    alloc = MultiAllocation((0b11,) * 3, 2)
    slack, _ = exact_d3_slack(alloc, [Additive([1, 1])] * 3)
    assert slack == 0


def test_small_run_is_deterministic():
    a = search_d3(60, seed=3)
    b = search_d3(60, seed=3)
    assert a.to_json() == b.to_json()
    assert a.exhaustive_cases > 0
    assert a.summary in ("none found in budget",) or a.findings
    for f in a.findings:
        assert f.slack < Fraction(0)
