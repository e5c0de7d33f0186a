"""Seeded random instances.

Every draw comes from a :class:`random.Random` (Mersenne Twister) seeded with
the caller's integer seed; the same seed and arguments always produce the
same instance, byte for byte once serialized.  Suites derive one generator
per trial from the string ``"{seed}:{check}:{trial}"``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..allocation import MultiAllocation
from ..errors import GenerationError
from ..itemsets import global_masks
from ..valuations import Additive, Explicit, Valuation, Xos, check_axioms
from .io import Instance

FAMILIES = ("additive", "xos", "truncated", "explicit")

MAX_WEIGHT = 8
MAX_CLAUSES = 4
FAMILY_MAX_ITEMS = {"additive": 64, "xos": 64, "truncated": 16, "explicit": 10}
EXPLICIT_BUDGET = 100


def trial_rng(seed: int, check: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{check}:{trial}")


def _weights(rng: random.Random, m: int) -> list[int]:
    return [rng.randint(0, MAX_WEIGHT) for _ in range(m)]


def truncated_table(weights, cap) -> dict[int, Fraction]:
    """``v(S) = min(sum of weights in S, cap)`` as an explicit table."""
    m = len(weights)
    gm = global_masks(list(range(m)))
    sums = [0] * (1 << m)
    for x in range(1, 1 << m):
        low = x & -x
        sums[x] = sums[x ^ low] + weights[low.bit_length() - 1]
    return {gm[x]: Fraction(min(sums[x], cap)) for x in range(1 << m)}


def _explicit_table(rng: random.Random, m: int, subadditive: bool) -> dict[int, Fraction]:
    # Values are built bottom-up: each set lies between its largest proper
    # subset and (if subadditive) its cheapest split into two disjoint parts.
    table = [0] * (1 << m)
    for x in range(1, 1 << m):
        if x & (x - 1) == 0:
            table[x] = rng.randint(0, MAX_WEIGHT)
            continue
        lo = 0
        r = x
        while r:
            low = r & -r
            r ^= low
            lo = max(lo, table[x ^ low])
        if subadditive:
            hi = None
            s = (x - 1) & x
            while s:
                t = x ^ s
                if s < t:
                    c = table[s] + table[t]
                    hi = c if hi is None or c < hi else hi
                s = (s - 1) & x
        else:
            hi = lo + MAX_WEIGHT
        table[x] = rng.randint(lo, hi)
    return {x: Fraction(v) for x, v in enumerate(table)}


def random_valuation(rng: random.Random, family: str, m: int, subadditive: bool = True) -> Valuation:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if m > FAMILY_MAX_ITEMS[family]:
        raise GenerationError(f"{family} family is limited to {FAMILY_MAX_ITEMS[family]} items")
    if family == "additive":
        return Additive(_weights(rng, m))
    if family == "xos":
        return Xos([_weights(rng, m) for _ in range(rng.randint(1, MAX_CLAUSES))])
    if family == "truncated":
        w = _weights(rng, m)
        cap = rng.randint(1, max(1, sum(w)))
        return Explicit(truncated_table(w, cap), (1 << m) - 1)
    axiom = "subadditive" if subadditive else "monotone"
    for _ in range(EXPLICIT_BUDGET):
        v = Explicit(_explicit_table(rng, m, subadditive), (1 << m) - 1)
        if check_axioms(v, axiom).ok:
            return v
    raise GenerationError(f"no {axiom} explicit table within {EXPLICIT_BUDGET} draws")


def random_multi_allocation(rng: random.Random, n: int, m: int, d: int,
                            min_holders: int = 1) -> MultiAllocation:
    """Each item gets between ``min_holders`` and ``min(d, n)`` distinct holders."""
    bundles = [0] * n
    top = min(d, n)
    for e in range(m):
        h = rng.randint(min(min_holders, top), top)
        for i in rng.sample(range(n), h):
            bundles[i] |= 1 << e
    return MultiAllocation(tuple(bundles), m)


def generate(family: str, n: int, m: int, seed: int, d: int | None = None) -> Instance:
    """Random instance of one valuation family, optionally with a width-``d``
    multi-allocation."""
    rng = random.Random(seed)
    vals = [random_valuation(rng, family, m) for _ in range(n)]
    alloc = random_multi_allocation(rng, n, m, d) if d is not None else None
    return Instance(m, vals, multi_allocation=alloc, d=d)


def random_graph_instance(rng: random.Random, n: int, max_degree: int,
                          families=FAMILIES, max_items: int = 12) -> Instance:
    """Width-2 multi-allocation (a multigraph with some singly-held items),
    mixed valuation families, every vertex incident with at most
    ``max_degree`` items."""
    m = rng.randint(1, max_items)
    deg = [0] * n
    bundles = [0] * n
    for e in range(m):
        h = 1 if rng.random() < 0.2 or n < 2 else 2
        hs = rng.sample(range(n), h)
        if any(deg[i] >= max_degree for i in hs):
            continue
        for i in hs:
            deg[i] += 1
            bundles[i] |= 1 << e
    vals = []
    for _ in range(n):
        fam = rng.choice(families)
        vals.append(random_valuation(rng, fam, min(m, FAMILY_MAX_ITEMS[fam])) if m <= FAMILY_MAX_ITEMS[fam]
                    else random_valuation(rng, "xos", m))
    return Instance(m, vals, multi_allocation=MultiAllocation(tuple(bundles), m), d=2)
