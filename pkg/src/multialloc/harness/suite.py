"""Cross-module property suite.

Each check runs independent seeded trials; trial ``t`` of check ``c`` under
suite seed ``s`` draws from ``random.Random(f"{s}:{c}:{t}")``, so any single
trial can be replayed on its own and trials may run in any order or process.
A violation carries a serialized witness instance.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..allocation import MultiAllocation
from ..errors import ProviderError
from ..game import P, Q, omega, omega_alternating
from ..itemsets import full
from ..mms import brute_multi_provider, mms, mms_removal_monotone, sampling_pipeline
from ..multigraph import allocate_graph, certify_graph_allocation, local_alternation_ok, trace_valid
from ..reduction import transform, transform_vector
from ..valuations import marginal_delta, max_item_value
from .generate import random_graph_instance, random_multi_allocation, random_valuation, trial_rng
from .io import Instance, dumps
from .oracles import oracle_mms, oracle_omega


@dataclass(frozen=True)
class Violation:
    check: str
    trial: int
    message: str
    witness: str  # serialized instance

    def to_json(self) -> dict:
        return {"check": self.check, "trial": self.trial, "message": self.message,
                "witness": self.witness}


@dataclass
class TrialOutcome:
    check: str
    trial: int
    violations: list[Violation] = field(default_factory=list)
    skipped: bool = False


def _fail(out: TrialOutcome, inst: Instance, message: str) -> None:
    inst.note = f"{out.check} trial {out.trial}: {message}"
    out.violations.append(Violation(out.check, out.trial, message, dumps(inst)))


# -- individual checks -------------------------------------------------------


def check_picking(seed: int, trial: int, families=("xos", "truncated"), max_items: int = 6
                  ) -> TrialOutcome:
    """Alternating-game bounds for one random valuation."""
    out = TrialOutcome("picking", trial)
    rng = trial_rng(seed, "picking", trial)
    m = rng.randint(1, max_items)
    v = random_valuation(rng, rng.choice(families), m)
    items = full(m)
    wp = omega_alternating(P, items, v).omega
    wq = omega_alternating(Q, items, v).omega
    top = v.value(items)
    delta = max_item_value(v, items)
    mdelta = marginal_delta(v, items)
    half_mms2 = mms(items, v, 2) / 2
    inst = Instance(m, [v])
    checks = [
        ("omega(S_p) >= omega(S_q)", wp, wq),
        ("omega(S_p) + omega(S_q) >= v(M)", wp + wq, top),
        ("omega(S_p) >= v(M)/2", wp, top / 2),
        ("omega(S_q) >= (v(M) - delta)/2", wq, (top - delta) / 2),
        ("omega(S_q) >= (v(M) - marginal delta)/2", wq, (top - mdelta) / 2),
        ("omega(S_q) >= MMS(M, 2)/2", wq, half_mms2),
    ]
    for name, lhs, rhs in checks:
        if lhs < rhs:
            _fail(out, inst, f"{name} fails: {lhs} < {rhs}")
    return out


def check_picking_monotone(seed: int, trial: int, max_items: int = 6) -> TrialOutcome:
    """omega(S_p) >= omega(S_q) for merely monotone valuations."""
    out = TrialOutcome("picking-monotone", trial)
    rng = trial_rng(seed, "picking-monotone", trial)
    m = rng.randint(1, max_items)
    v = random_valuation(rng, "explicit", m, subadditive=False)
    wp = omega_alternating(P, full(m), v).omega
    wq = omega_alternating(Q, full(m), v).omega
    if wp < wq:
        _fail(out, Instance(m, [v]), f"omega(S_p) = {wp} < omega(S_q) = {wq}")
    return out


def check_oracle_omega(seed: int, trial: int, sizes=(2, 3, 4)) -> TrialOutcome:
    """Memoized solver equals plain minimax on every sequence."""
    out = TrialOutcome("oracle-omega", trial)
    rng = trial_rng(seed, "oracle-omega", trial)
    m = sizes[trial % len(sizes)]
    v = random_valuation(rng, rng.choice(("xos", "truncated", "explicit")), m)
    for code in range(1 << m):
        seq = "".join(P if code >> t & 1 else Q for t in range(m))
        fast = omega(seq, full(m), v).omega
        slow = oracle_omega(seq, full(m), v)
        if fast != slow:
            _fail(out, Instance(m, [v]), f"sequence {seq}: solver {fast} != oracle {slow}")
    return out


def check_token_game(seed: int, trial: int, max_agents: int = 6, max_degree: int = 8
                     ) -> TrialOutcome:
    """Token-game certificates on a random multigraph with a random jump rule."""
    out = TrialOutcome("token-game", trial)
    rng = trial_rng(seed, "token-game", trial)
    n = rng.randint(2, max_agents)
    inst = random_graph_instance(rng, n, max_degree)
    g = inst.graph()
    start = rng.randrange(n)
    jumps = random.Random(rng.getrandbits(64))
    padded, orient, trace = allocate_graph(g, inst.valuations, start, lambda c: jumps.choice(c))
    for cert in certify_graph_allocation(padded, inst.valuations, orient):
        if not cert.pass_omega:
            _fail(out, inst, f"agent {cert.agent}: value {cert.value} < omega(S_q) {cert.omega_q}")
        if not cert.pass_gap:
            _fail(out, inst, f"agent {cert.agent}: value {cert.value} < (v - delta)/2 {cert.half_gap}")
        if not cert.pass_mms:
            _fail(out, inst, f"agent {cert.agent}: value {cert.value} < MMS2/2 {cert.half_mms2}")
    problems = trace_valid(padded, trace)
    if problems:
        _fail(out, inst, "invalid trace: " + "; ".join(problems))
    if not local_alternation_ok(padded, trace):
        _fail(out, inst, "local alternation broken")
    return out


def _transform_problems(alloc, final, report) -> list[str]:
    msgs = []
    for a in report.failures():
        msgs.append(f"agent {a.agent}: final {a.final} < bound {a.bound}")
    for a in report.agents:
        if not a.level_bounds_ok():
            msgs.append(f"agent {a.agent}: a level lost more than half of (value - delta)")
    if not report.widths_halve():
        msgs.append(f"widths {report.widths} do not halve per level")
    if not final.is_allocation:
        msgs.append("result is not an allocation")
    if not final.contained_in(alloc):
        msgs.append("result is not contained in the input")
    return msgs


def check_transform(seed: int, trial: int, d: int = 4, max_agents: int = 5, max_items: int = 6
                    ) -> TrialOutcome:
    out = TrialOutcome("transform", trial)
    rng = trial_rng(seed, "transform", trial)
    n = rng.randint(2, max_agents)
    m = rng.randint(1, max_items)
    vals = [random_valuation(rng, rng.choice(("additive", "xos", "truncated", "explicit")), m)
            for _ in range(n)]
    alloc = random_multi_allocation(rng, n, m, d)
    final, report = transform(alloc, vals, d)
    for msg in _transform_problems(alloc, final, report):
        _fail(out, Instance(m, vals, multi_allocation=alloc, d=d), msg)
    return out


VECTOR_D = (2, 2, 4, 4)


def random_vector_allocation(rng: random.Random, d_vec, m: int) -> MultiAllocation:
    """Every item's holder count is at most ``d_i`` for each of its holders."""
    n = len(d_vec)
    bundles = [0] * n
    for e in range(m):
        while True:
            hs = rng.sample(range(n), rng.randint(1, max(d_vec)))
            if all(len(hs) <= d_vec[i] for i in hs):
                break
        for i in hs:
            bundles[i] |= 1 << e
    return MultiAllocation(tuple(bundles), m)


def check_transform_vector(seed: int, trial: int, d_vec=VECTOR_D, max_items: int = 6
                           ) -> TrialOutcome:
    out = TrialOutcome("transform-vector", trial)
    rng = trial_rng(seed, "transform-vector", trial)
    m = rng.randint(1, max_items)
    vals = [random_valuation(rng, rng.choice(("additive", "xos", "truncated")), m) for _ in d_vec]
    alloc = random_vector_allocation(rng, d_vec, m)
    final, report = transform_vector(alloc, vals, d_vec)
    for msg in _transform_problems(alloc, final, report):
        inst = Instance(m, vals, multi_allocation=alloc, d=max(d_vec))
        _fail(out, inst, f"d-vector {','.join(map(str, d_vec))}: {msg}")
    return out


def check_mms(seed: int, trial: int, max_items: int = 6) -> TrialOutcome:
    """Partition search equals brute force; monotone in n; removal monotone."""
    out = TrialOutcome("mms", trial)
    rng = trial_rng(seed, "mms", trial)
    m = rng.randint(1, max_items)
    n = rng.randint(2, 4)
    vals = [random_valuation(rng, rng.choice(("additive", "xos", "truncated", "explicit")), m)
            for _ in range(n)]
    inst = Instance(m, vals)
    items = full(m)
    v = vals[0]
    prev = None
    for parts in range(1, min(m + 1, 4) + 1):
        fast = mms(items, v, parts)
        slow = oracle_mms(items, v, parts)
        if fast != slow:
            _fail(out, inst, f"MMS(agent 0, {parts}) = {fast} but oracle gives {slow}")
        if prev is not None and fast > prev:
            _fail(out, inst, f"MMS(agent 0) increases from {prev} to {fast} at {parts} parts")
        prev = fast
    agent = rng.randrange(n)
    item = rng.randrange(m)
    for chk in mms_removal_monotone(items, vals, agent, item):
        if not chk.ok:
            _fail(out, inst, f"removing agent {agent} and item {item} lowers agent {chk.agent}'s "
                             f"MMS from {chk.before} to {chk.after}")
    return out


def check_pipeline(seed: int, trial: int, max_agents: int = 3, max_items: int = 5) -> TrialOutcome:
    out = TrialOutcome("pipeline", trial)
    rng = trial_rng(seed, "pipeline", trial)
    n = rng.randint(2, max_agents)
    m = rng.randint(1, max_items)
    rho = rng.choice((Fraction(1, 2), Fraction(1)))
    vals = [random_valuation(rng, rng.choice(("additive", "xos", "truncated")), m)
            for _ in range(n)]
    inst = Instance(m, vals)
    try:
        rep = sampling_pipeline(vals, full(m), brute_multi_provider, rho, 2)
    except ProviderError:
        out.skipped = True
        return out
    for a in rep.agents:
        if not a.passed:
            _fail(out, inst, f"rho {rho}: agent {a.agent} gets {a.final} < {a.threshold}")
        if not a.chain_ok:
            _fail(out, inst, f"rho {rho}: agent {a.agent} chain bound {a.chain} < {a.threshold}")
    return out


CHECKS: dict[str, Callable[[int, int], TrialOutcome]] = {
    "picking": check_picking,
    "picking-monotone": check_picking_monotone,
    "oracle-omega": check_oracle_omega,
    "token-game": check_token_game,
    "transform": check_transform,
    "transform-vector": check_transform_vector,
    "mms": check_mms,
    "pipeline": check_pipeline,
}

DEFAULT_TRIALS = {
    "picking": 500,
    "picking-monotone": 200,
    "oracle-omega": 150,
    "token-game": 200,
    "transform": 200,
    "transform-vector": 100,
    "mms": 100,
    "pipeline": 100,
}


# -- runner ------------------------------------------------------------------


@dataclass
class CheckSummary:
    check: str
    trials: int
    skipped: int
    violations: list[Violation]


@dataclass
class SuiteReport:
    seed: int
    checks: list[CheckSummary]

    @property
    def ok(self) -> bool:
        return not any(c.violations for c in self.checks)

    def violations(self) -> list[Violation]:
        return [v for c in self.checks for v in c.violations]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "checks": [{"check": c.check, "trials": c.trials, "skipped": c.skipped,
                        "violations": [v.to_json() for v in c.violations]} for c in self.checks],
        }


def _run_one(job: tuple[str, int, int]) -> TrialOutcome:
    name, seed, trial = job
    return CHECKS[name](seed, trial)


def run_suite(seed: int = 0, trials: dict[str, int] | None = None, jobs: int = 1) -> SuiteReport:
    """Run every check; ``trials`` overrides the per-check trial counts."""
    counts = dict(DEFAULT_TRIALS)
    if trials:
        unknown = set(trials) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        counts.update(trials)
    work = [(name, seed, t) for name in CHECKS for t in range(counts[name])]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, work, chunksize=8))
    else:
        outcomes = [_run_one(w) for w in work]
    summaries = []
    for name in CHECKS:
        mine = sorted((o for o in outcomes if o.check == name), key=lambda o: o.trial)
        summaries.append(CheckSummary(
            name, len(mine), sum(o.skipped for o in mine),
            [v for o in mine for v in o.violations],
        ))
    return SuiteReport(seed, summaries)
