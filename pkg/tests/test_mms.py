import random
from fractions import Fraction

import pytest

from multialloc import (
    Additive,
    FileProvider,
    MultiAllocation,
    PreconditionError,
    ProviderError,
    ResourceLimitError,
    brute_multi_provider,
    guarantee_for_n,
    mms,
    mms_partition,
    mms_removal_monotone,
    n_sequence,
    sampling_pipeline,
)
from multialloc.harness.generate import random_valuation
from multialloc.harness.oracles import oracle_mms
from multialloc.itemsets import full
from multialloc.mms import loglog_floor_holds


def test_mms_examples(pm):
    v = Additive([1, 1, 1])
    assert mms(full(3), v, 1) == 3
    assert mms(full(3), v, 2) == 1
    assert mms(full(3), v, 4) == 0
    assert mms(full(4), pm, 2) == 2
    share, parts = mms_partition(full(4), pm, 2)
    assert sorted(parts) == [0b0011, 0b1100]


def test_mms_partition_witness_is_partition():
    rng = random.Random(4)
    for _ in range(20):
        m = rng.randint(1, 7)
        v = random_valuation(rng, "xos", m)
        n = rng.randint(1, 4)
        share, parts = mms_partition(full(m), v, n)
        assert len(parts) == n
        acc = 0
        for p in parts:
            assert acc & p == 0
            acc |= p
        assert acc == full(m)
        assert min(v.value(p) for p in parts) == share


def test_mms_matches_oracle_and_monotone():
    rng = random.Random(8)
    for _ in range(40):
        m = rng.randint(1, 6)
        v = random_valuation(rng, rng.choice(("xos", "truncated", "explicit")), m)
        prev = None
        for n in range(1, 5):
            got = mms(full(m), v, n)
            assert got == oracle_mms(full(m), v, n)
            assert prev is None or got <= prev
            prev = got


def test_mms_limits():
    with pytest.raises(ResourceLimitError):
        mms(full(13), Additive([1] * 13), 3)
    assert mms(full(16), Additive([1] * 16), 2) == 8
    with pytest.raises(ValueError):
        mms(full(2), Additive([1, 1]), 0)


def test_removal_examples():
    chk = mms_removal_monotone(full(2), [Additive([1, 1])] * 2, 0, 0)
    assert [(c.before, c.after, c.ok) for c in chk] == [(1, 1, True)]
    chk = mms_removal_monotone(full(1), [Additive([1])] * 3, 0, 0)
    assert all(c.before == 0 == c.after for c in chk)
    with pytest.raises(PreconditionError):
        mms_removal_monotone(full(1), [Additive([1])], 0, 0)


def test_removal_random_additive():
    rng = random.Random(9)
    for _ in range(30):
        m, n = rng.randint(1, 6), rng.randint(2, 4)
        vals = [random_valuation(rng, "additive", m) for _ in range(n)]
        assert all(c.ok for c in mms_removal_monotone(full(m), vals, rng.randrange(n), rng.randrange(m)))


def test_brute_provider_examples():
    got = brute_multi_provider([Additive([1])] * 2, full(1), Fraction(1, 2), 2)
    assert got.bundles == (1, 1)
    got = brute_multi_provider([Additive([1, 1])] * 2, full(2), 1, 1)
    assert sorted(got.bundles) == [1, 2]
    vals = [Additive([3, 1, 2]), Additive([1, 1, 1])]
    got = brute_multi_provider(vals, full(3), 1, 2)
    assert got.bundles == (full(3), full(3))


def test_brute_provider_not_found_is_none():
    # both agents would need their whole MMS twice over from exclusive bundles
    assert brute_multi_provider([Additive([1, 1])] * 2, full(2), 2, 1) is None


def test_pipeline_worked_example():
    vals = [Additive([10, 1, 1]), Additive([1, 1, 1])]
    rep = sampling_pipeline(vals, full(3), brute_multi_provider, Fraction(1, 2), 2)
    assert rep.alpha == Fraction(1, 6)
    assert [a.mms for a in rep.agents] == [2, 1]
    assert [a.threshold for a in rep.agents] == [Fraction(1, 3), Fraction(1, 6)]
    assert rep.peeled[0] == (0, 0)
    assert rep.ok


def _many_units():
    # MMS = 7 and alpha * MMS = 7/6 > 1, so no single item crosses the threshold
    return [Additive([1] * 14)] * 2


def test_pipeline_empty_peel_list():
    rep = sampling_pipeline(_many_units(), full(14), brute_multi_provider, Fraction(1, 2), 2)
    assert rep.peeled == ()
    assert rep.survivors == (0, 1)
    assert rep.ok
    assert all(a.chain_ok for a in rep.agents)


def test_file_provider_and_contract_check():
    good = FileProvider(MultiAllocation((full(14), full(14)), 14))
    assert sampling_pipeline(_many_units(), full(14), good, Fraction(1, 2), 2).ok
    bad = FileProvider(MultiAllocation((1, full(14)), 14))
    with pytest.raises(ProviderError) as exc:
        sampling_pipeline(_many_units(), full(14), bad, Fraction(1, 2), 2)
    assert exc.value.agent == 0
    wide = FileProvider(MultiAllocation((full(14), full(14)), 14))
    with pytest.raises(ProviderError):
        sampling_pipeline(_many_units(), full(14), wide, Fraction(1, 2), 1)


def test_pipeline_provider_none_raises():
    def nothing(vals, items, rho, d, agents=None):
        return None

    with pytest.raises(ProviderError):
        sampling_pipeline(_many_units(), full(14), nothing, Fraction(1, 2), 2)


def test_recompute_thresholds_option_still_certifies():
    rng = random.Random(12)
    for _ in range(10):
        vals = [random_valuation(rng, "additive", 4) for _ in range(3)]
        rep = sampling_pipeline(vals, full(4), brute_multi_provider, Fraction(1, 2), 2,
                                recompute_thresholds=True)
        assert rep.ok


def test_sequence_and_guarantees():
    seq = n_sequence(6)
    assert seq[:4] == [2, 6, 42, 1806]
    for d, n_d in enumerate(seq, start=1):
        if d >= 2:
            assert n_d > 2 ** (2 ** (d - 1))
    g = guarantee_for_n(5)
    assert (g.d, g.alpha, g.guarantee) == (2, Fraction(1, 6), Fraction(1, 5))
    g = guarantee_for_n(1805)
    assert (g.d, g.d_hat, g.alpha) == (4, 4, Fraction(1, 14))
    g = guarantee_for_n(41)
    assert (g.d, g.d_hat, g.alpha) == (3, 4, Fraction(1, 14))
    g = guarantee_for_n(10 ** 50)
    assert (g.d, g.d_hat, g.alpha) == (8, 8, Fraction(1, 30))
    assert guarantee_for_n(3).floor_check is None


def test_loglog_floor_exact_cases():
    assert loglog_floor_holds(Fraction(1, 8), 4)
    assert not loglog_floor_holds(Fraction(1, 9), 4)
    assert loglog_floor_holds(Fraction(1, 16), 2 ** 4)
    assert not loglog_floor_holds(Fraction(1, 17), 2 ** 4)
    # log2 log2 (10^50) is about 7.38, so the floor is about 1/59.0
    assert loglog_floor_holds(Fraction(1, 59), 10 ** 50)
    assert not loglog_floor_holds(Fraction(1, 60), 10 ** 50)
