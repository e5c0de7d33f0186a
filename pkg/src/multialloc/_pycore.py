"""Pure-Python kernels.  Reference semantics for the compiled ``_ccore``.

Both kernels work on integer tables: ``values[x]`` is the (scaled) value of
the local item set ``x``.  Callers convert exact fractions to integers with a
common denominator, so integer results are exact.
"""

from __future__ import annotations

import sys
from math import comb

BACKEND = "python"


def count_states(turns) -> int:
    """Number of (held, remaining) states the game solver will store."""
    m = len(turns)
    total = 0
    a = 0
    for t in range(m + 1):
        total += comb(m, t) * comb(t, a)
        if t < m and turns[t]:
            a += 1
    return total


class GameTable:
    """Solved picking game over local items ``0..m-1``.

    ``turns[t]`` is true when player p makes pick ``t``.  Values are maximin
    values for p of the state ``(held, remaining)`` where ``held`` is p's
    bundle so far.  Both players break ties towards the lowest item index.
    """

    def __init__(self, values, turns):
        self.m = m = len(turns)
        if len(values) != 1 << m:
            raise ValueError("value table size does not match the sequence length")
        self.turns = tuple(1 if t else 0 for t in turns)
        self._values = values
        self._prefix = [0] * (m + 1)
        for t in range(m):
            self._prefix[t + 1] = self._prefix[t] + self.turns[t]
        self._memo: dict[int, tuple[int, int]] = {}
        limit = sys.getrecursionlimit()
        if limit < 10 * m + 100:
            sys.setrecursionlimit(10 * m + 100)
        self.omega = self._solve(0, (1 << m) - 1)

    def _solve(self, held: int, rem: int) -> int:
        key = (rem << self.m) | held
        hit = self._memo.get(key)
        if hit is not None:
            return hit[0]
        if not rem:
            v = self._values[held]
            self._memo[key] = (v, -1)
            return v
        t = self.m - rem.bit_count()
        p_moves = self.turns[t]
        best = None
        pick = -1
        r = rem
        while r:
            low = r & -r
            r ^= low
            if p_moves:
                val = self._solve(held | low, rem ^ low)
                if best is None or val > best:
                    best, pick = val, low.bit_length() - 1
            else:
                val = self._solve(held, rem ^ low)
                if best is None or val < best:
                    best, pick = val, low.bit_length() - 1
        self._memo[key] = (best, pick)
        return best

    def _lookup(self, held: int, rem: int) -> tuple[int, int]:
        full = (1 << self.m) - 1
        if held & rem or (held | rem) & ~full:
            raise KeyError((held, rem))
        t = self.m - rem.bit_count()
        if held.bit_count() != self._prefix[t]:
            raise KeyError((held, rem))
        return self._memo[(rem << self.m) | held]

    def value(self, held: int, rem: int) -> int:
        return self._lookup(held, rem)[0]

    def choice(self, held: int, rem: int) -> int:
        return self._lookup(held, rem)[1]

    @property
    def states(self) -> int:
        return len(self._memo)


def solve_game(values, turns) -> GameTable:
    return GameTable(values, turns)


def max_min_partition(values, m: int, n: int) -> tuple[int, list[int]]:
    """Best ``min_j values[P_j]`` over partitions of ``m`` items into ``n`` bundles.

    Bundles may be empty.  Partitions are generated as restricted-growth
    strings (item ``i`` joins an open bundle or opens the next one), so each
    unordered partition is visited once.  A branch is cut when even handing
    every unassigned item to every bundle cannot beat the incumbent.
    Returns the value and one optimal labelling (first found).
    """
    if n < 1:
        raise ValueError("need at least one bundle")
    full = (1 << m) - 1
    if m == 0:
        return values[0], []
    blocks = [0] * n
    labels = [0] * m
    best = -1
    best_labels: list[int] = []

    def bound(i: int, used: int) -> int:
        rest = full >> i << i
        b = None
        for j in range(used):
            x = values[blocks[j] | rest]
            if b is None or x < b:
                b = x
        if used < n:
            if n - used > m - i:
                return 0
            x = values[rest]
            if b is None or x < b:
                b = x
        return b

    def rec(i: int, used: int) -> None:
        nonlocal best, best_labels
        if i == m:
            val = 0 if used < n else min(values[blocks[j]] for j in range(used))
            if val > best:
                best = val
                best_labels = labels[:]
            return
        if bound(i, used) <= best:
            return
        bit = 1 << i
        top = used + 1 if used < n else used
        for j in range(top):
            blocks[j] |= bit
            labels[i] = j
            rec(i + 1, used + 1 if j == used else used)
            blocks[j] ^= bit

    rec(0, 0)
    return best, best_labels
