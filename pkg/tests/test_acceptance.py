"""Acceptance criteria, one test per criterion, each at its stated time limit.

A summary line per criterion is printed at the end of the pytest run.
"""

import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from multialloc import (
    Additive,
    MultiAllocation,
    brute_multi_provider,
    guarantee_for_n,
    mms,
    n_sequence,
    omega,
    omega_alternating,
    sampling_pipeline,
    Xos,
    transform,
)
from multialloc.game import Q
from multialloc.harness.generate import random_valuation, trial_rng
from multialloc.harness.oracles import oracle_best_allocation, oracle_mms
from multialloc.harness.suite import (
    check_mms,
    check_oracle_omega,
    check_picking,
    check_pipeline,
    check_token_game,
    check_transform,
    check_transform_vector,
)
from multialloc.itemsets import full
from multialloc.mms import loglog_floor_holds

from conftest import pair_max, tight_instance

SEED = 20240601
RESULTS: dict[int, tuple[str, bool, float]] = {}


@contextmanager
def criterion(number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        if ok and limit is not None and elapsed >= limit:
            ok = False
            title += f" (over the {limit:g} s limit)"
        RESULTS[number] = (title, ok, elapsed)
    assert elapsed < limit if limit is not None else True, f"took {elapsed:.2f} s, limit {limit} s"


def _violations(check, count, **kw):
    outcomes = [check(SEED, t, **kw) for t in range(count)]
    return outcomes, [v for o in outcomes for v in o.violations]


def test_01_remark_fixtures():
    with criterion(1, "pair-max fixtures: omega(pqpq) = 1, omega(qppq) = 2", 1):
        v = pair_max()
        assert omega("pqpq", full(4), v).omega == 1
        assert omega("qppq", full(4), v).omega == 2


def test_02_tightness_fixture():
    with criterion(2, "tight instance d in {2,4,8}: worst agent 0 = bound, optimum slack 0", 5):
        for d in (2, 4, 8):
            alloc, vals = tight_instance(d)
            final, rep = transform(alloc, vals, d)
            assert min(a.final for a in rep.agents) == 0
            assert all(a.bound == 0 for a in rep.agents)
            assert rep.ok and final.is_allocation
            best, _ = oracle_best_allocation(alloc, vals, [a.bound for a in rep.agents])
            assert best == 0


def test_03_picking_property_suite():
    with criterion(3, "picking-game properties, 500 xos/truncated instances, m <= 6", 60):
        _, bad = _violations(check_picking, 500)
        assert not bad, bad[0].message


def test_04_discrepancy_fixture():
    with criterion(4, "discrepancy: omega(S_q) = 1 < 2 = MMS(M, v, 2)", 1):
        v = pair_max()
        wq = omega_alternating(Q, full(4), v).omega
        share = mms(full(4), v, 2)
        assert (wq, share) == (1, 2)
        assert oracle_mms(full(4), v, 2) == 2
        assert wq == share / 2


def test_05_token_game_certification():
    with criterion(5, "token game, 200 random multigraphs, n <= 6, degree <= 8", 120):
        _, bad = _violations(check_token_game, 200, max_agents=6, max_degree=8)
        assert not bad, bad[0].message


def test_06_transform_certification():
    with criterion(6, "transform d=4 (200 trials) and d-vector (2,2,4,4) (200 trials)", 120):
        _, bad = _violations(check_transform, 200, d=4, max_agents=5, max_items=6)
        assert not bad, bad[0].message
        _, bad = _violations(check_transform_vector, 200, d_vec=(2, 2, 4, 4), max_items=6)
        assert not bad, bad[0].message


def test_07_oracle_equivalence():
    with criterion(7, "memoized omega == plain minimax, 50 instances per m in {2,3,4}", 30):
        _, bad = _violations(check_oracle_omega, 150, sizes=(2, 3, 4))
        assert not bad, bad[0].message


def test_08_mms():
    with criterion(8, "MMS == oracle (m <= 6), monotone in n, removal monotone (100)"):
        _, bad = _violations(check_mms, 100, max_items=6)
        assert not bad, bad[0].message


def test_09_guarantee_arithmetic():
    with criterion(9, "guarantee arithmetic: 1/6, 1/14, 1/30, n_d, loglog floor"):
        assert guarantee_for_n(5).alpha == Fraction(1, 6)
        assert guarantee_for_n(1805).alpha == Fraction(1, 14)
        assert guarantee_for_n(10 ** 50).alpha == Fraction(1, 30)
        seq = n_sequence(6)
        assert seq[1:4] == [6, 42, 1806]
        assert seq[0] == 2
        for d in range(2, 7):
            assert seq[d - 1] > 2 ** (2 ** (d - 1))
        for n in (4, 16, 2 ** 16, 10 ** 50):
            g = guarantee_for_n(n)
            assert g.floor_check is True
            assert loglog_floor_holds(g.guarantee, n)


def _group_provider(groups):
    """Each group gets its own width-1 rho-MMS allocation, with MMS taken
    over the group size; the union is a width-2 multi-allocation."""

    def provide(vals, items, rho, d, agents=None):
        bundles = [0] * len(vals)
        pos = {a: k for k, a in enumerate(agents)}
        for group in groups:
            members_ = [a for a in group if a in pos]
            if not members_:
                continue
            got = brute_multi_provider([vals[pos[a]] for a in members_], items, rho, 1)
            assert got is not None, "no half-MMS allocation for a group"
            for a, b in zip(members_, got.bundles):
                bundles[pos[a]] = b
        return MultiAllocation(tuple(bundles), max(items.bit_length(), 1))

    return provide


def test_10_pipeline():
    with criterion(10, "pipeline: worked example, 100 random runs, two-group scenario", 120):
        vals = [Additive([10, 1, 1]), Additive([1, 1, 1])]
        rep = sampling_pipeline(vals, full(3), brute_multi_provider, Fraction(1, 2), 2)
        assert rep.peeled[0] == (0, 0)
        assert rep.alpha == Fraction(1, 6)
        assert all(a.final >= Fraction(1, 6) * a.mms for a in rep.agents)

        outcomes, bad = _violations(check_pipeline, 100)
        assert not bad, bad[0].message
        assert not any(o.skipped for o in outcomes), "provider found nothing in some trial"

        # Two groups of at most four agents, each with its own width-1 half-MMS
        # allocation.  With few items peeling absorbs every agent, so the merge
        # is also checked directly on the full instance.
        for t in range(6):
            rng = trial_rng(SEED, "two-groups", t)
            n = rng.randint(4, 6)
            m = rng.randint(n, 8)
            vals = [random_valuation(rng, rng.choice(("additive", "xos")), m) for _ in range(n)]
            half = n // 2
            groups = (tuple(range(half)), tuple(range(half, n)))
            assert all(len(g) <= 4 for g in groups)
            provide = _group_provider(groups)
            rep = sampling_pipeline(vals, full(m), provide, Fraction(1, 2), 2)
            assert rep.multi_allocation.width <= 2
            for a in rep.agents:
                assert a.final >= Fraction(1, 6) * a.mms, (t, a)

            merged = provide(vals, full(m), Fraction(1, 2), 2, agents=tuple(range(n)))
            assert merged.width <= 2
            for i, v in enumerate(vals):
                assert v.value(merged.bundles[i]) >= Fraction(1, 2) * mms(full(m), v, n), (t, i)
            _, trep = transform(merged, vals, 2)
            assert trep.ok, (t, trep.failures())

        # Two agents, one per group, with items too small to peel: the group
        # provider and the transform both run inside the pipeline.
        for t in range(3):
            rng = trial_rng(SEED, "two-groups-unpeeled", t)
            vals = [Xos([[rng.choice((7, 8)) for _ in range(14)] for _ in range(2)]) for _ in range(2)]
            rep = sampling_pipeline(vals, full(14), _group_provider(((0,), (1,))), Fraction(1, 2), 2)
            assert rep.peeled == () and rep.survivors == (0, 1)
            assert rep.multi_allocation.width == 2
            assert rep.ok and all(a.chain_ok for a in rep.agents), (t, rep.failures())


def pytest_terminal_summary_lines():
    out = []
    for number in sorted(RESULTS):
        title, ok, elapsed = RESULTS[number]
        out.append(f"criterion {number:2}: {'PASS' if ok else 'FAIL'}  {elapsed:7.2f} s  {title}")
    return out


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
