"""Multi-allocations: per-agent bundles that may overlap."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .itemsets import ItemSet, as_mask, members


@dataclass(frozen=True)
class MultiAllocation:
    """Bundles of ``n`` agents over items ``0..m-1``.

    The width is the largest number of agents holding one item; an
    allocation proper is the width-1 case.
    """

    bundles: tuple[ItemSet, ...]
    m: int

    def __post_init__(self):
        for i, b in enumerate(self.bundles):
            if b >> self.m:
                raise ValueError(f"bundle of agent {i} references an item >= {self.m}")

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]], m: int | None = None) -> MultiAllocation:
        masks = tuple(as_mask(x) for x in lists)
        if m is None:
            m = max((b.bit_length() for b in masks), default=0)
        return cls(masks, m)

    @property
    def n(self) -> int:
        return len(self.bundles)

    def holders(self, e: int) -> list[int]:
        return [i for i, b in enumerate(self.bundles) if b >> e & 1]

    def holder_counts(self) -> list[int]:
        counts = [0] * self.m
        for b in self.bundles:
            for e in members(b):
                counts[e] += 1
        return counts

    @property
    def width(self) -> int:
        return max(self.holder_counts(), default=0)

    def is_allocation(self) -> bool:
        return self.width <= 1

    def lists(self) -> list[list[int]]:
        return [members(b) for b in self.bundles]

    def covered(self) -> ItemSet:
        out = 0
        for b in self.bundles:
            out |= b
        return out

    def contained_in(self, other: MultiAllocation) -> bool:
        """True when every bundle is a subset of the matching bundle of ``other``."""
        return self.n == other.n and all(b & ~o == 0 for b, o in zip(self.bundles, other.bundles))


def widths_ok(alloc: MultiAllocation, d: int | Sequence[int]) -> list[tuple[int, int]]:
    """Violations ``(agent, item)`` of a uniform or per-agent width bound."""
    counts = alloc.holder_counts()
    bad = []
    for i, b in enumerate(alloc.bundles):
        cap = d if isinstance(d, int) else d[i]
        for e in members(b):
            if counts[e] > cap:
                bad.append((i, e))
    return bad
