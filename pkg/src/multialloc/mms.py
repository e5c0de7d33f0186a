"""Maximin shares, the peel-then-transform pipeline and guarantee arithmetic."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import kernels
from .allocation import MultiAllocation
from .errors import PreconditionError, ProviderError, ResourceLimitError
from .itemsets import ItemSet, as_mask, iter_members, members
from .reduction import TransformReport, next_power_of_two, transform
from .valuations import Valuation, max_item_value, scaled_table

MAX_MMS_ITEMS = 12
MAX_MMS_ITEMS_TWO_PARTS = 20


def mms_partition(items, v: Valuation, n: int, *, backend: str | None = None
                  ) -> tuple[Fraction, list[ItemSet]]:
    """Maximin share of ``v`` over ``items`` split into ``n`` bundles, with a witness.

    Bundles may be empty, so the share is 0 whenever ``n`` exceeds the
    number of items.
    """
    if n < 1:
        raise ValueError(f"number of parts must be positive, got {n}")
    mask = as_mask(items)
    its = members(mask)
    m = len(its)
    if n == 1:
        return v.value(mask), [mask]
    if n > m:
        return Fraction(0), [1 << e for e in its] + [0] * (n - m)
    limit = MAX_MMS_ITEMS_TWO_PARTS if n == 2 else MAX_MMS_ITEMS
    if m > limit:
        raise ResourceLimitError(f"MMS with {n} parts is limited to {limit} items, got {m}")
    table, scale = scaled_table(v.local_table(its))
    best, labels = kernels.max_min_partition(table, m, n, backend=backend)
    parts = [0] * n
    for pos, lab in enumerate(labels):
        parts[lab] |= 1 << its[pos]
    return Fraction(best, scale), parts


def mms(items, v: Valuation, n: int, *, backend: str | None = None) -> Fraction:
    return mms_partition(items, v, n, backend=backend)[0]


@dataclass(frozen=True)
class RemovalCheck:
    agent: int
    before: Fraction
    after: Fraction

    @property
    def ok(self) -> bool:
        return self.after >= self.before


def mms_removal_monotone(items, valuations: Sequence[Valuation], agent: int, item: int
                         ) -> list[RemovalCheck]:
    """MMS of each other agent before and after removing ``agent`` and ``item``."""
    n = len(valuations)
    if n < 2:
        raise PreconditionError("removal needs at least two agents")
    mask = as_mask(items)
    if not mask >> item & 1:
        raise PreconditionError(f"item {item} is not in the instance")
    rest = mask & ~(1 << item)
    return [
        RemovalCheck(j, mms(mask, v, n), mms(rest, v, n - 1))
        for j, v in enumerate(valuations)
        if j != agent
    ]


# -- providers ---------------------------------------------------------------

# provider(valuations, items, rho, d, agents=...) -> MultiAllocation over the same
# item ids with one bundle per given valuation, or None when nothing qualifies.
# ``agents`` carries the original indices of the given valuations.
Provider = Callable[..., "MultiAllocation | None"]


def brute_multi_provider(valuations: Sequence[Valuation], items, rho, d: int, agents=None
                         ) -> MultiAllocation | None:
    """First qualifying multi-allocation in lexicographic order.

    Items are decided in index order; each item's holder set runs over agent
    subsets of size at most ``d`` in decreasing order of their codes, so
    fuller assignments are tried first and "nobody" comes last.  A multi-allocation qualifies when every agent
    ``i`` gets ``v_i(A_i) >= rho * MMS_i`` with MMS over ``items`` and the
    given number of agents.
    """
    rho = Fraction(rho)
    mask = as_mask(items)
    its = members(mask)
    n = len(valuations)
    m_total = mask.bit_length()
    if n == 0:
        return MultiAllocation((), m_total)
    targets = [rho * mms(mask, v, n) for v in valuations]
    choices = [s for s in reversed(range(1 << n)) if s.bit_count() <= d]
    bundles = [0] * n

    def feasible(rest: ItemSet) -> bool:
        return all(v.value(bundles[i] | rest) >= targets[i] for i, v in enumerate(valuations))

    def rec(k: int) -> bool:
        rest = as_mask(its[k:])
        if not feasible(rest):
            return False
        if k == len(its):
            return True
        bit = 1 << its[k]
        for s in choices:
            for i in iter_members(s):
                bundles[i] |= bit
            if rec(k + 1):
                return True
            for i in iter_members(s):
                bundles[i] &= ~bit
        return False

    if rec(0):
        return MultiAllocation(tuple(bundles), m_total)
    return None


class FileProvider:
    """Provider returning a fixed multi-allocation over the original agents
    (for example one loaded from an instance file).  The survivors' bundles
    are handed out, clipped to the surviving items."""

    def __init__(self, alloc: MultiAllocation):
        self.alloc = alloc

    def __call__(self, valuations, items, rho, d, agents=None):
        chosen = range(len(valuations)) if agents is None else agents
        items = as_mask(items)
        return MultiAllocation(tuple(self.alloc.bundles[i] & items for i in chosen),
                               max(self.alloc.m, items.bit_length()))


# -- pipeline ----------------------------------------------------------------


@dataclass(frozen=True)
class PipelineAgent:
    agent: int
    mms: Fraction
    threshold: Fraction  # alpha * MMS_i
    final: Fraction
    peeled_item: int | None
    chain: Fraction | None  # (rho * MMS_i - (d_hat - 1) * delta_i) / d_hat for survivors

    @property
    def passed(self) -> bool:
        return self.final >= self.threshold

    @property
    def chain_ok(self) -> bool:
        return self.chain is None or self.chain >= self.threshold


@dataclass(frozen=True)
class PipelineReport:
    rho: Fraction
    d: int
    d_hat: int
    alpha: Fraction
    peeled: tuple[tuple[int, int], ...]
    survivors: tuple[int, ...]
    surviving_items: ItemSet
    multi_allocation: MultiAllocation  # survivors' bundles, indexed like ``survivors``
    allocation: MultiAllocation  # all agents
    agents: tuple[PipelineAgent, ...]
    transform_report: TransformReport | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.agents)

    def failures(self) -> list[PipelineAgent]:
        return [a for a in self.agents if not a.passed]


def sampling_pipeline(valuations: Sequence[Valuation], items, provider: Provider, rho, d: int,
                      *, recompute_thresholds: bool = False) -> PipelineReport:
    """Peel high-value (agent, item) pairs, then transform a provided
    rho-MMS d-multi-allocation of the rest; certify ``alpha * MMS_i`` for all.

    ``alpha = rho / (2 * d_hat - 1)``.  Thresholds use the original
    instance's MMS values unless ``recompute_thresholds`` is set.
    """
    rho = Fraction(rho)
    mask = as_mask(items)
    n = len(valuations)
    d_hat = next_power_of_two(d)
    alpha = rho / (2 * d_hat - 1)
    shares = [mms(mask, v, n) for v in valuations]
    thresholds = [alpha * s for s in shares]

    alive = list(range(n))
    rest = mask
    peeled: list[tuple[int, int]] = []
    while True:
        if recompute_thresholds and peeled:
            thresholds = [alpha * mms(rest, valuations[i], len(alive)) if i in alive else t
                          for i, t in enumerate(thresholds)]
        hit = None
        for i in alive:
            for e in iter_members(rest):
                if valuations[i].value(1 << e) >= thresholds[i]:
                    hit = (i, e)
                    break
            if hit:
                break
        if hit is None:
            break
        peeled.append(hit)
        alive.remove(hit[0])
        rest &= ~(1 << hit[1])

    m_total = mask.bit_length()
    surv_vals = [valuations[i] for i in alive]
    multi = provider(surv_vals, rest, rho, d, agents=tuple(alive))
    if multi is None:
        raise ProviderError("provider found no qualifying multi-allocation")
    _check_provided(multi, surv_vals, alive, rest, rho, d)

    final_bundles = [0] * n
    for i, e in peeled:
        final_bundles[i] = 1 << e
    report_t = None
    if alive:
        local = MultiAllocation(multi.bundles, max(multi.m, m_total))
        out, report_t = transform(local, surv_vals, d)
        for k, i in enumerate(alive):
            final_bundles[i] = out.bundles[k]
    allocation = MultiAllocation(tuple(final_bundles), m_total)

    peeled_of = dict(peeled)
    agents = []
    for i, v in enumerate(valuations):
        chain = None
        if i in alive:
            k = alive.index(i)
            delta = max_item_value(v, multi.bundles[k])
            chain = (rho * shares[i] - (d_hat - 1) * delta) / d_hat
        agents.append(PipelineAgent(
            agent=i,
            mms=shares[i],
            threshold=alpha * shares[i],
            final=v.value(final_bundles[i]),
            peeled_item=peeled_of.get(i),
            chain=chain,
        ))
    return PipelineReport(rho, d, d_hat, alpha, tuple(peeled), tuple(alive), rest, multi,
                          allocation, tuple(agents), report_t)


def _check_provided(multi: MultiAllocation, vals, alive, items: ItemSet, rho: Fraction, d: int):
    if multi.n != len(vals):
        raise ProviderError(f"provider returned {multi.n} bundles for {len(vals)} agents")
    for k, b in enumerate(multi.bundles):
        if b & ~items:
            raise ProviderError(f"bundle of agent {alive[k]} uses removed or unknown items",
                                agent=alive[k])
    if multi.width > d:
        raise ProviderError(f"provider returned width {multi.width} > d = {d}")
    n = len(vals)
    for k, v in enumerate(vals):
        need = rho * mms(items, v, n)
        if v.value(multi.bundles[k]) < need:
            raise ProviderError(
                f"agent {alive[k]} gets {v.value(multi.bundles[k])} < rho * MMS = {need}",
                agent=alive[k],
            )


# -- guarantee arithmetic ----------------------------------------------------


def n_sequence(count: int) -> list[int]:
    """``n_1 = 2`` and ``n_{d+1} = n_d (n_d + 1)``; the first ``count`` terms."""
    out = []
    x = 2
    for _ in range(count):
        out.append(x)
        x = x * (x + 1)
    return out


@dataclass(frozen=True)
class Guarantee:
    n: int
    d: int
    d_hat: int
    alpha: Fraction
    guarantee: Fraction  # max(alpha, 1/n)
    floor_check: bool | None  # guarantee >= 1/(8 log2 log2 n); None for n < 4


def loglog_floor_holds(g: Fraction, n: int) -> bool:
    """Exact decision of ``g >= 1 / (8 * log2(log2(n)))`` for ``n >= 4``.

    Equivalent to ``log2(n) ** b >= 2 ** a`` where ``a / b = 1 / (8 g)``.
    When ``n`` is a power of two both sides are integers; otherwise
    ``log2(n)`` is irrational, equality is impossible and certified interval
    arithmetic at increasing precision settles the comparison.
    """
    if n < 4:
        raise ValueError("the log log floor needs n >= 4")
    if g <= 0:
        return False
    r = 1 / (8 * Fraction(g))
    a, b = r.numerator, r.denominator
    if n & (n - 1) == 0:
        x = n.bit_length() - 1
        return x ** b >= 2 ** a
    iv = mpmath.iv
    saved = iv.prec
    prec = 64
    try:
        while prec <= 1 << 16:
            iv.prec = prec
            lhs = iv.log(iv.mpf(n), 2) ** b
            rhs = iv.mpf(2) ** a
            if lhs.a >= rhs.b:
                return True
            if lhs.b < rhs.a:
                return False
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("could not separate the two sides")


def guarantee_for_n(n: int) -> Guarantee:
    if n < 1:
        raise ValueError("n must be positive")
    d = 1
    n_d = 2
    while not n < n_d:
        d += 1
        n_d = n_d * (n_d + 1)
    d_hat = next_power_of_two(d)
    alpha = Fraction(1, 2) / (2 * d_hat - 1)
    g = max(alpha, Fraction(1, n))
    floor = loglog_floor_holds(g, n) if n >= 4 else None
    return Guarantee(n, d, d_hat, alpha, g, floor)
