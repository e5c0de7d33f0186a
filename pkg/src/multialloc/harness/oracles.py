"""Brute-force oracles, deliberately independent of the fast solvers.

Nothing here shares code with the memoized game solver or the partition
search: values come straight from the valuations themselves.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from fractions import Fraction
from math import gcd

from ..allocation import MultiAllocation
from ..errors import ResourceLimitError
from ..itemsets import as_mask, members
from ..valuations import Valuation

MAX_ORACLE_GAME_ITEMS = 8
MAX_ORACLE_MMS_LABELINGS = 10 ** 6
MAX_ORACLE_ALLOCATIONS = 10 ** 7


def oracle_omega(sequence: str, items, v: Valuation) -> Fraction:
    """Plain minimax, no memo and no pruning."""
    its = members(as_mask(items))
    seq = str(sequence).strip().lower()
    if len(its) > MAX_ORACLE_GAME_ITEMS:
        raise ResourceLimitError(f"oracle_omega is limited to {MAX_ORACLE_GAME_ITEMS} items")
    if len(seq) != len(its):
        raise ValueError(f"sequence has {len(seq)} turns for {len(its)} items")

    def rec(t: int, left: tuple[int, ...], held: int) -> Fraction:
        if t == len(seq):
            return v.value(held)
        outcomes = [rec(t + 1, left[:k] + left[k + 1:], held | (1 << e) if seq[t] == "p" else held)
                    for k, e in enumerate(left)]
        return max(outcomes) if seq[t] == "p" else min(outcomes)

    return rec(0, tuple(its), 0)


def oracle_mms(items, v: Valuation, n: int) -> Fraction:
    """Max over all ``n ** m`` labelings of the minimum bundle value."""
    its = members(as_mask(items))
    if n ** len(its) > MAX_ORACLE_MMS_LABELINGS:
        raise ResourceLimitError(f"{n}^{len(its)} labelings exceed the oracle limit")
    best = None
    for labels in itertools.product(range(n), repeat=len(its)):
        parts = [0] * n
        for e, lab in zip(its, labels):
            parts[lab] |= 1 << e
        worst = min(v.value(p) for p in parts)
        if best is None or worst > best:
            best = worst
    return best


def oracle_best_allocation(alloc: MultiAllocation, valuations: Sequence[Valuation],
                           bounds: Sequence[Fraction]) -> tuple[Fraction, MultiAllocation]:
    """Best achievable ``min_i (v_i(A'_i) - bound_i)`` over allocations with
    ``A'_i`` inside ``A_i``.

    Items go to exactly one of their holders (valuations are monotone, so
    discarding an item never helps); unheld items stay unallocated.  The
    search walks every such allocation in lexicographic order of holder
    choices, skipping a branch only when it provably cannot beat the best
    value found: either some agent stays at or below it even with all of her
    undecided items, or more agents need another item than there are items
    left.  Returns the optimum and the first allocation attaining it.
    """
    n = alloc.n
    if len(valuations) != n or len(bounds) != n:
        raise ValueError("need one valuation and one bound per agent")
    held = [(e, alloc.holders(e)) for e in range(alloc.m)]
    held = [(e, hs) for e, hs in held if hs]
    count = 1
    for _, hs in held:
        count *= len(hs)
    if count > MAX_ORACLE_ALLOCATIONS:
        raise ResourceLimitError(f"{count} allocations exceed the oracle limit")
    if n == 0:
        return Fraction(0), alloc

    # per agent: value minus bound of every subset of her bundle, in local bits
    own = [members(b) for b in alloc.bundles]
    pos = [{e: k for k, e in enumerate(its)} for its in own]
    raw = [[x - Fraction(bounds[i]) for x in valuations[i].local_table(own[i])] for i in range(n)]
    scale = 1
    for tab in raw:
        for x in tab:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    tabs = [[int(x * scale) for x in tab] for tab in raw]
    # rest[k][i]: agent i's local bits of the items decided at step k or later
    rest = [[0] * n for _ in range(len(held) + 1)]
    for k in range(len(held) - 1, -1, -1):
        rest[k] = list(rest[k + 1])
        e, hs = held[k]
        for i in hs:
            rest[k][i] |= 1 << pos[i][e]

    local = [0] * n
    choice = [0] * len(held)
    best = None
    arg: list[int] = []

    def rec(k: int) -> None:
        nonlocal best, arg
        if best is not None:
            top = min(tabs[i][local[i] | rest[k][i]] for i in range(n))
            if top <= best:
                return
            # each agent not yet above ``best`` needs a distinct undecided item
            needy = sum(1 for i in range(n) if tabs[i][local[i]] <= best)
            if needy > len(held) - k:
                return
        if k == len(held):
            best = min(tabs[i][local[i]] for i in range(n))
            arg = list(choice)
            return
        e, hs = held[k]
        for i in hs:
            bit = 1 << pos[i][e]
            local[i] |= bit
            choice[k] = i
            rec(k + 1)
            local[i] &= ~bit

    rec(0)
    bundles = [0] * n
    for (e, _), i in zip(held, arg):
        bundles[i] |= 1 << e
    return Fraction(best, scale), MultiAllocation(tuple(bundles), alloc.m)
