"""Counterexample search for the un-rounded bound at d = 3.

The question is whether every 3-multi-allocation admits an allocation with
``v_i(A'_i) >= v_i(A_i)/3 - (2/3) delta_i`` for all agents.  A finding is an
instance where the brute-force optimum of
``min_i (v_i(A'_i) - bound_i)`` is negative.  The search makes no claim when
nothing turns up.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..allocation import MultiAllocation
from ..reduction import theorem_bound
from ..valuations import Additive, max_item_value
from .generate import random_multi_allocation, random_valuation, trial_rng
from .io import Instance, dumps
from .oracles import oracle_best_allocation

D = 3


@dataclass(frozen=True)
class Finding:
    source: str  # "random" or "exhaustive"
    index: int
    slack: Fraction
    witness: str


@dataclass
class SearchReport:
    seed: int
    random_trials: int
    exhaustive_cases: int
    findings: list[Finding] = field(default_factory=list)

    @property
    def summary(self) -> str:
        if not self.findings:
            return "none found in budget"
        return f"{len(self.findings)} candidate(s) found; flag for manual review"

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "random_trials": self.random_trials,
            "exhaustive_cases": self.exhaustive_cases,
            "summary": self.summary,
            "findings": [{"source": f.source, "index": f.index, "slack": str(f.slack),
                          "witness": f.witness} for f in self.findings],
        }


def exact_d3_slack(alloc: MultiAllocation, vals) -> tuple[Fraction, MultiAllocation]:
    bounds = [theorem_bound(v.value(alloc.bundles[i]), max_item_value(v, alloc.bundles[i]), D)
              for i, v in enumerate(vals)]
    return oracle_best_allocation(alloc, vals, bounds)


def _random_case(job: tuple[int, int, int, int]) -> Finding | None:
    seed, trial, max_agents, max_items = job
    rng = trial_rng(seed, "search-d3", trial)
    n = rng.randint(min(3, max_agents), max_agents)
    m = rng.randint(1, max_items)
    vals = [random_valuation(rng, "xos", m) for _ in range(n)]
    alloc = random_multi_allocation(rng, n, m, D)
    slack, _ = exact_d3_slack(alloc, vals)
    if slack < 0:
        inst = Instance(m, vals, multi_allocation=alloc, d=D,
                        note=f"exact d=3 bound unattainable, optimum slack {slack}")
        return Finding("random", trial, slack, dumps(inst))
    return None


def exhaustive_cases(max_items: int = 2, weights=(0, 1, 2)):
    """Three agents sharing every item, additive weights from ``weights``."""
    for m in range(1, max_items + 1):
        everything = (1 << m) - 1
        alloc = MultiAllocation((everything,) * 3, m)
        for ws in itertools.product(weights, repeat=3 * m):
            yield m, alloc, [Additive(ws[i * m:(i + 1) * m]) for i in range(3)]


def search_d3(budget: int, seed: int = 0, max_agents: int = 4, max_items: int = 5,
              exhaustive: bool = True, jobs: int = 1) -> SearchReport:
    report = SearchReport(seed, budget, 0)
    if budget <= 0:
        return report
    work = [(seed, t, max_agents, max_items) for t in range(budget)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(_random_case, work, chunksize=16))
    else:
        found = [_random_case(w) for w in work]
    report.findings.extend(f for f in found if f is not None)
    if exhaustive:
        for k, (m, alloc, vals) in enumerate(exhaustive_cases()):
            report.exhaustive_cases += 1
            slack, _ = exact_d3_slack(alloc, vals)
            if slack < 0:
                inst = Instance(m, vals, multi_allocation=alloc, d=D,
                                note=f"exact d=3 bound unattainable, optimum slack {slack}")
                report.findings.append(Finding("exhaustive", k, slack, dumps(inst)))
    report.findings.sort(key=lambda f: (f.source, f.index))
    return report
