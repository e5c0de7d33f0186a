"""Recursive halving of d-multi-allocations into allocations.

One halving level replaces every item by copies, each held by at most two
agents (holders sorted by index and paired consecutively), allocates the
copies with the multigraph token game and projects the won copies back to
their items.  An item with ``h`` holders leaves the level with at most
``ceil(h / 2)`` holders, and every agent keeps value at least
``(v(A_i) - delta_i) / 2``.  Repeating ``log2(d_hat)`` times yields
``v(A'_i) >= v(A_i) / d_hat - (d_hat - 1) / d_hat * delta_i``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .allocation import MultiAllocation, widths_ok
from .errors import PreconditionError
from .itemsets import ItemSet, iter_members
from .multigraph import (
    JumpRule,
    MultiGraph,
    Orientation,
    TokenTrace,
    allocate_graph,
    from_two_multi,
    lowest_vertex,
)
from .valuations import Pullback, Valuation, marginal_delta, max_item_value


@dataclass(frozen=True)
class CopyInstance:
    source: tuple[int, ...]  # copy id -> source item
    holders: tuple[tuple[int, ...], ...]  # copy id -> one or two agents

    def project(self, copies: ItemSet) -> ItemSet:
        out = 0
        for c in iter_members(copies):
            out |= 1 << self.source[c]
        return out

    def valuations(self, valuations: Sequence[Valuation]) -> list[Pullback]:
        """Each agent values a copy set by the distinct source items behind it."""
        mapping = dict(enumerate(self.source))
        return [Pullback(v, mapping) for v in valuations]


def split_copies(alloc: MultiAllocation) -> tuple[CopyInstance, MultiAllocation]:
    source: list[int] = []
    holders: list[tuple[int, ...]] = []
    bundles = [0] * alloc.n
    for e in range(alloc.m):
        hs = alloc.holders(e)
        for j in range(0, len(hs), 2):
            pair = tuple(hs[j:j + 2])
            c = len(source)
            source.append(e)
            holders.append(pair)
            for i in pair:
                bundles[i] |= 1 << c
    ci = CopyInstance(tuple(source), tuple(holders))
    return ci, MultiAllocation(tuple(bundles), len(source))


@dataclass(frozen=True)
class HalvingLevel:
    before: MultiAllocation
    after: MultiAllocation
    copies: CopyInstance | None
    graph: MultiGraph | None  # padded copy graph
    orientation: Orientation | None
    trace: TokenTrace | None


def halve_level(alloc: MultiAllocation, valuations: Sequence[Valuation], start: int = 0,
                jump_rule: JumpRule = lowest_vertex) -> HalvingLevel:
    if alloc.width <= 1:
        return HalvingLevel(alloc, alloc, None, None, None, None)
    ci, copy_alloc = split_copies(alloc)
    cvals = ci.valuations(valuations)
    graph, orientation, trace = allocate_graph(from_two_multi(copy_alloc), cvals, start, jump_rule)
    won = orientation.bundles(graph)
    after = MultiAllocation(tuple(ci.project(w) for w in won), alloc.m)
    return HalvingLevel(alloc, after, ci, graph, orientation, trace)


def halve(alloc: MultiAllocation, valuations: Sequence[Valuation], start: int = 0,
          jump_rule: JumpRule = lowest_vertex) -> MultiAllocation:
    return halve_level(alloc, valuations, start, jump_rule).after


def next_power_of_two(d: int) -> int:
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    return 1 << (d - 1).bit_length()


@dataclass(frozen=True)
class AgentOutcome:
    agent: int
    initial: Fraction
    final: Fraction
    delta: Fraction
    d_used: int
    bound: Fraction
    marginal_delta: Fraction
    levels: tuple[Fraction, ...]  # value after each halving level, initial first

    @property
    def passed(self) -> bool:
        return self.final >= self.bound

    @property
    def slack(self) -> Fraction:
        return self.final - self.bound

    @property
    def marginal_bound(self) -> Fraction:
        """Informational bound with the marginal-delta variant."""
        d = self.d_used
        return self.initial / d - Fraction(d - 1, d) * self.marginal_delta

    def level_bounds_ok(self) -> bool:
        """Each level keeps at least half of (previous value - delta)."""
        return all(b >= (a - self.delta) / 2 for a, b in zip(self.levels, self.levels[1:]))


def theorem_bound(initial: Fraction, delta: Fraction, d: int) -> Fraction:
    return initial / d - Fraction(d - 1, d) * delta


@dataclass(frozen=True)
class TransformReport:
    agents: tuple[AgentOutcome, ...]
    depth: int
    widths: tuple[int, ...]  # width before each level, then the final width

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.agents)

    def failures(self) -> list[AgentOutcome]:
        return [a for a in self.agents if not a.passed]

    def widths_halve(self) -> bool:
        return all(b <= (a + 1) // 2 for a, b in zip(self.widths, self.widths[1:]))

    @property
    def worst_slack(self) -> Fraction | None:
        return min((a.slack for a in self.agents), default=None)


def _run_levels(alloc, valuations, depth, start, jump_rule):
    levels = [alloc]
    current = alloc
    for _ in range(depth):
        current = halve(current, valuations, start, jump_rule)
        levels.append(current)
    return levels


def _report(alloc, valuations, levels, d_hats, depth) -> TransformReport:
    agents = []
    for i, v in enumerate(valuations):
        a_i = alloc.bundles[i]
        vals = tuple(v.value(lv.bundles[i]) for lv in levels)
        delta = max_item_value(v, a_i)
        agents.append(AgentOutcome(
            agent=i,
            initial=vals[0],
            final=vals[-1],
            delta=delta,
            d_used=d_hats[i],
            bound=theorem_bound(vals[0], delta, d_hats[i]),
            marginal_delta=marginal_delta(v, a_i),
            levels=vals,
        ))
    return TransformReport(tuple(agents), depth, tuple(lv.width for lv in levels))


def transform(alloc: MultiAllocation, valuations: Sequence[Valuation], d: int, start: int = 0,
              jump_rule: JumpRule = lowest_vertex) -> tuple[MultiAllocation, TransformReport]:
    """Allocation with ``A'_i`` inside ``A_i`` meeting the per-agent bound.

    ``d`` is rounded up to the next power of two ``d_hat``; exactly
    ``log2(d_hat)`` halving levels run.
    """
    if len(valuations) != alloc.n:
        raise ValueError(f"{len(valuations)} valuations for {alloc.n} agents")
    if alloc.width > d:
        raise PreconditionError(f"multi-allocation has width {alloc.width} > d = {d}")
    d_hat = next_power_of_two(d)
    depth = d_hat.bit_length() - 1
    levels = _run_levels(alloc, valuations, depth, start, jump_rule)
    report = _report(alloc, valuations, levels, [d_hat] * alloc.n, depth)
    return levels[-1], report


def transform_vector(alloc: MultiAllocation, valuations: Sequence[Valuation], d_vec: Sequence[int],
                     start: int = 0, jump_rule: JumpRule = lowest_vertex
                     ) -> tuple[MultiAllocation, TransformReport]:
    """Per-agent widths: each item of agent ``i`` has at most ``d_vec[i]`` holders.

    The global halving loop runs ``max_i log2(d_hat_i)`` levels; items that
    become singly held stop moving, so agent ``i`` is settled after
    ``log2(d_hat_i)`` levels.  Every bound is certified in the report.
    """
    if len(d_vec) != alloc.n or len(valuations) != alloc.n:
        raise ValueError("d_vec and valuations must have one entry per agent")
    if any(d < 1 for d in d_vec):
        raise ValueError("every d_i must be a positive integer")
    bad = widths_ok(alloc, list(d_vec))
    if bad:
        i, e = bad[0]
        raise PreconditionError(
            f"item {e} of agent {i} has {len(alloc.holders(e))} holders > d_{i} = {d_vec[i]}"
        )
    d_hats = [next_power_of_two(d) for d in d_vec]
    depth = max((dh.bit_length() - 1 for dh in d_hats), default=0)
    levels = _run_levels(alloc, valuations, depth, start, jump_rule)
    report = _report(alloc, valuations, levels, d_hats, depth)
    return levels[-1], report
