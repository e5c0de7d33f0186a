from multialloc import Additive
from multialloc.harness import io
from multialloc.harness.suite import CHECKS, check_picking, run_suite


def test_suite_small_run_passes():
    rep = run_suite(seed=7, trials={name: 3 for name in CHECKS})
    assert rep.ok
    assert [c.trials for c in rep.checks] == [3] * len(CHECKS)


def test_suite_is_deterministic():
    counts = {name: 2 for name in CHECKS}
    assert run_suite(5, counts).to_json() == run_suite(5, counts).to_json()


def test_trials_replay_individually():
    a = check_picking(9, 4)
    b = check_picking(9, 4)
    assert a == b


def test_parallel_matches_serial():
    counts = {name: 2 for name in CHECKS}
    assert run_suite(3, counts, jobs=2).to_json() == run_suite(3, counts).to_json()


def test_unknown_check_rejected():
    import pytest

    with pytest.raises(ValueError):
        run_suite(0, {"bogus": 1})


def test_violation_witness_is_loadable(monkeypatch):
    from multialloc.harness import suite

    def broken(seed, trial):
        out = suite.TrialOutcome("picking", trial)
        suite._fail(out, io.Instance(1, [Additive([1])]), "forced")
        return out

    monkeypatch.setitem(suite.CHECKS, "picking", broken)
    rep = run_suite(0, {name: (1 if name == "picking" else 0) for name in CHECKS})
    assert not rep.ok
    v = rep.violations()[0]
    assert io.loads(v.witness).note.endswith("forced")
