"""Two-player full-information picking games.

Player p has a monotone valuation; player q picks adversarially to minimize
p's final value.  :func:`omega` computes p's maximin value together with an
optimal deterministic policy by exhaustive minimax over
``(p's bundle, remaining items)`` states.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import kernels
from .errors import ResourceLimitError, StateError
from .itemsets import ItemSet, as_mask, compress, members
from .valuations import Valuation, scaled_table

P = "p"
Q = "q"

MAX_GAME_ITEMS = 20


@dataclass(frozen=True)
class PickSequence:
    turns: tuple[str, ...]

    def __post_init__(self):
        bad = [t for t in self.turns if t not in (P, Q)]
        if bad:
            raise ValueError(f"picking sequence may only contain 'p' and 'q', got {bad[0]!r}")

    @classmethod
    def parse(cls, text: str) -> PickSequence:
        return cls(tuple(text.strip().lower()))

    @classmethod
    def alternating(cls, first: str, length: int) -> PickSequence:
        first = first.lower()
        if first not in (P, Q):
            raise ValueError(f"first mover must be 'p' or 'q', got {first!r}")
        other = Q if first == P else P
        return cls(tuple(first if t % 2 == 0 else other for t in range(length)))

    @classmethod
    def alt_p(cls, length: int) -> PickSequence:
        return cls.alternating(P, length)

    @classmethod
    def alt_q(cls, length: int) -> PickSequence:
        return cls.alternating(Q, length)

    def __len__(self):
        return len(self.turns)

    def __str__(self):
        return "".join(self.turns)

    def mover(self, turn: int) -> str:
        return self.turns[turn]


@dataclass(frozen=True)
class GameQuery:
    sequence: PickSequence
    items: ItemSet
    valuation: Valuation

    def __post_init__(self):
        if len(self.sequence) != self.items.bit_count():
            raise ValueError(
                f"sequence has {len(self.sequence)} turns for {self.items.bit_count()} items"
            )


@dataclass(frozen=True)
class GameResult:
    """Maximin value and optimal play of one picking game.

    States are addressed by ``(remaining, held)`` item masks in the caller's
    item numbering; ``held`` is p's bundle so far.  The turn index is implied
    by ``|remaining|``.
    """

    omega: Fraction
    sequence: PickSequence
    items: tuple[int, ...]
    _table: object = field(repr=False, compare=False)
    _scale: int = field(repr=False, compare=False)

    @property
    def item_mask(self) -> ItemSet:
        return as_mask(self.items)

    def _local(self, remaining: ItemSet, held: ItemSet) -> tuple[int, int]:
        universe = self.item_mask
        if (remaining | held) & ~universe:
            raise StateError(f"state ({remaining}, {held}) uses items outside the game")
        return compress(held, self.items), compress(remaining, self.items)

    def turn_of(self, remaining: ItemSet) -> int:
        return len(self.items) - remaining.bit_count()

    def state_value(self, remaining: ItemSet, held: ItemSet = 0) -> Fraction:
        h, r = self._local(remaining, held)
        try:
            v = self._table.value(h, r)
        except KeyError:
            raise StateError(f"state ({remaining}, {held}) is not reachable") from None
        return Fraction(v, self._scale)

    def pick(self, remaining: ItemSet, held: ItemSet = 0) -> int:
        h, r = self._local(remaining, held)
        if not r:
            raise StateError("no item remains to be picked")
        try:
            c = self._table.choice(h, r)
        except KeyError:
            raise StateError(f"state ({remaining}, {held}) is not reachable") from None
        return self.items[c]

    @cached_property
    def policy(self) -> dict[tuple[ItemSet, ItemSet], int]:
        """p's optimal pick at every state reachable when p follows this
        policy and q plays arbitrarily.  Keyed by ``(remaining, held)``."""
        out: dict[tuple[ItemSet, ItemSet], int] = {}
        stack = [(self.item_mask, 0)]
        seen = set()
        while stack:
            rem, held = stack.pop()
            if not rem or (rem, held) in seen:
                continue
            seen.add((rem, held))
            if self.sequence.mover(self.turn_of(rem)) == P:
                e = self.pick(rem, held)
                out[(rem, held)] = e
                stack.append((rem & ~(1 << e), held | 1 << e))
            else:
                for e in members(rem):
                    stack.append((rem & ~(1 << e), held))
        return out

    @property
    def states(self) -> int:
        return self._table.states


def omega(query: GameQuery | PickSequence | str, items=None, valuation: Valuation | None = None,
          *, backend: str | None = None,
          state_budget: int = kernels.DEFAULT_STATE_BUDGET) -> GameResult:
    """Solve a picking game.

    Accepts either a :class:`GameQuery` or ``(sequence, items, valuation)``.
    Both players break ties towards the lowest item index.
    """
    if not isinstance(query, GameQuery):
        seq = PickSequence.parse(query) if isinstance(query, str) else query
        query = GameQuery(seq, as_mask(items), valuation)
    its = members(query.items)
    if len(its) > MAX_GAME_ITEMS:
        raise ResourceLimitError(f"picking games are limited to {MAX_GAME_ITEMS} items")
    table, scale = scaled_table(query.valuation.local_table(its))
    turns = [1 if t == P else 0 for t in query.sequence.turns]
    solved = kernels.solve_game(table, turns, backend=backend, state_budget=state_budget)
    return GameResult(Fraction(solved.omega, scale), query.sequence, tuple(its), solved, scale)


def omega_alternating(first: str, items: int | Iterable[int], valuation: Valuation,
                      **kwargs) -> GameResult:
    mask = as_mask(items)
    seq = PickSequence.alternating(first, mask.bit_count())
    return omega(GameQuery(seq, mask, valuation), **kwargs)


def best_pick(result: GameResult, remaining: int | Iterable[int], turn: int | None = None,
              held: int | Iterable[int] = 0) -> int:
    """Optimal pick for the player to move at ``(remaining, held)``.

    ``turn`` is optional; when given it must agree with the number of items
    already picked.
    """
    rem = as_mask(remaining)
    if turn is not None and turn != result.turn_of(rem):
        raise StateError(
            f"turn {turn} does not match {result.turn_of(rem)} items already picked"
        )
    return result.pick(rem, as_mask(held))
