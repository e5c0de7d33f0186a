import random
from fractions import Fraction

import pytest
from hypothesis import given

from multialloc import (
    Additive,
    Explicit,
    PickSequence,
    ResourceLimitError,
    StateError,
    best_pick,
    omega,
    omega_alternating,
)
from multialloc.errors import MultiallocError
from multialloc.game import GameQuery, P, Q
from multialloc.harness.generate import random_valuation
from multialloc.harness.oracles import oracle_omega
from multialloc.itemsets import full, members

from conftest import xos_valuations


def test_remark_fixtures(pm):
    assert omega("pqpq", full(4), pm).omega == 1
    assert omega("qppq", full(4), pm).omega == 2


def test_single_item():
    assert omega("p", {0}, Additive([7])).omega == 7
    assert omega("q", {0}, Additive([7])).omega == 0


def test_additive_pqp(add321):
    assert omega("pqp", full(3), add321).omega == 4


def test_alternating_examples(pm, add321):
    assert omega_alternating(P, full(4), pm).omega == 1
    assert omega_alternating(Q, full(4), pm).omega == 1
    wp = omega_alternating(P, full(3), add321).omega
    wq = omega_alternating(Q, full(3), add321).omega
    assert (wp, wq) == (4, 2)
    assert wp + wq == add321.value(full(3))


def test_best_pick_examples(add321, pm):
    res = omega("pqp", full(3), add321)
    assert best_pick(res, full(3), 0) == 0
    res = omega_alternating(Q, full(4), pm)
    assert best_pick(res, full(4) & ~1, 1) == 1
    one = omega("pqp", full(3), add321)
    assert best_pick(one, {2}, 2, held={0}) == 2


def test_best_pick_rejects_bad_state(add321):
    res = omega("pqp", full(3), add321)
    with pytest.raises(StateError):
        best_pick(res, full(3), 1)
    with pytest.raises(StateError):
        res.pick(0b1000)


def test_sequence_validation(add321):
    with pytest.raises(ValueError):
        PickSequence.parse("pxq")
    with pytest.raises(ValueError):
        GameQuery(PickSequence.parse("pq"), full(3), add321)
    assert str(PickSequence.alt_q(3)) == "qpq"


def test_size_limit():
    with pytest.raises(ResourceLimitError):
        omega_alternating(P, full(21), Additive([1] * 21))


def test_state_budget_enforced():
    with pytest.raises(ResourceLimitError):
        omega_alternating(P, full(10), Additive([1] * 10), state_budget=100)


def test_items_need_not_be_contiguous(add321):
    v = Additive([0, 3, 0, 2, 1])
    assert omega("pqp", {1, 3, 4}, v).omega == 4


def test_fractional_values_exact():
    v = Additive([Fraction(1, 3), Fraction(1, 2)])
    assert omega("pq", full(2), v).omega == Fraction(1, 2)


@given(xos_valuations(max_items=4))
def test_matches_oracle_on_all_sequences(mv):
    m, v = mv
    for code in range(1 << m):
        seq = "".join("p" if code >> t & 1 else "q" for t in range(m))
        assert omega(seq, full(m), v).omega == oracle_omega(seq, full(m), v)


@given(xos_valuations(max_items=6))
def test_alternating_bounds(mv):
    m, v = mv
    wp = omega_alternating(P, full(m), v).omega
    wq = omega_alternating(Q, full(m), v).omega
    top = v.value(full(m))
    assert wp >= wq
    assert wp + wq >= top


def test_prop_2_2_on_monotone_tables():
    rng = random.Random(11)
    for _ in range(40):
        m = rng.randint(1, 5)
        v = random_valuation(rng, "explicit", m, subadditive=False)
        assert omega_alternating(P, full(m), v).omega >= omega_alternating(Q, full(m), v).omega


def test_policy_soundness_against_random_adversaries():
    rng = random.Random(3)
    for _ in range(10):
        m = rng.randint(2, 6)
        v = random_valuation(rng, rng.choice(("xos", "truncated")), m)
        seq = "".join(rng.choice("pq") for _ in range(m))
        res = omega(seq, full(m), v)
        for _ in range(100):
            rem, held = full(m), 0
            for t in seq:
                if t == "p":
                    e = res.pick(rem, held)
                    assert (rem, held) in res.policy
                    held |= 1 << e
                else:
                    e = rng.choice(members(rem))
                rem &= ~(1 << e)
            assert v.value(held) >= res.omega


def test_policy_defined_on_reachable_states(add321):
    res = omega("pqp", full(3), add321)
    assert res.policy[(full(3), 0)] == 0
    assert all(rem & held == 0 for rem, held in res.policy)


def test_errors_share_base():
    assert issubclass(StateError, MultiallocError)
    assert issubclass(StateError, KeyError)


def test_works_on_explicit_tables():
    v = Explicit({0: 0, 1: 2, 2: 2, 3: 3})
    assert omega("pq", full(2), v).omega == 2
    assert omega("qp", full(2), v).omega == 2
