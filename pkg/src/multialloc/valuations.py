"""Monotone set functions over indivisible items, with exact arithmetic.

Three concrete representations are supported (additive weights, XOS clause
lists, explicit tables) plus views derived from another valuation: the
marginal view given a set already held, the conjugate view ``v(M) - v(M \\ T)``
and a restriction to a sub-domain.  A pullback view re-labels items so that
copies of an item (or edges of a multigraph) can be valued through the
valuation of the underlying items.

All values are :class:`fractions.Fraction`; floats are rejected at the door.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import DomainError, MalformedValuationError, ResourceLimitError
from .itemsets import ItemSet, as_mask, global_masks, iter_members, members, submasks

MAX_EXPLICIT_ITEMS = 16

ZERO = Fraction(0)


def to_fraction(x) -> Fraction:
    """Exact conversion of ints, Fractions and ``"p/q"`` strings."""
    if isinstance(x, bool):
        raise TypeError("bool is not a value")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError(f"floating point value {x!r} rejected; use an integer ratio")
    if isinstance(x, str):
        s = x.strip()
        if "." in s or "e" in s.lower():
            raise TypeError(f"decimal literal {x!r} rejected; use an integer ratio")
        return Fraction(s)
    raise TypeError(f"cannot read {type(x).__name__} as a value")


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class Valuation:
    """Common interface.  Subclasses implement :meth:`_value`."""

    ground: ItemSet

    def value(self, items: int | Iterable[int]) -> Fraction:
        mask = as_mask(items)
        if mask & ~self.ground:
            raise DomainError(
                f"items {members(mask & ~self.ground)} lie outside the ground set"
            )
        if not mask:
            return ZERO
        return self._value(mask)

    __call__ = value

    def _value(self, mask: ItemSet) -> Fraction:
        raise NotImplementedError

    def singleton(self, e: int) -> Fraction:
        return self.value(1 << e)

    def local_table(self, items: Sequence[int]) -> list[Fraction]:
        """Values of every subset of ``items``, indexed by local mask.

        Position ``j`` of the local mask stands for ``items[j]``.
        """
        mask = as_mask(items)
        if mask & ~self.ground:
            raise DomainError(
                f"items {members(mask & ~self.ground)} lie outside the ground set"
            )
        return self._table(list(items))

    def _table(self, items: list[int]) -> list[Fraction]:
        gm = global_masks(items)
        out = [ZERO] * len(gm)
        for x in range(1, len(gm)):
            out[x] = self._value(gm[x])
        return out


def _check_weights(ws: Iterable) -> tuple[Fraction, ...]:
    out = tuple(to_fraction(w) for w in ws)
    for w in out:
        if w < 0:
            raise MalformedValuationError(f"negative weight {w}")
    return out


def _additive_table(weights: Sequence[Fraction], items: list[int]) -> list[Fraction]:
    table = [ZERO] * (1 << len(items))
    for pos, e in enumerate(items):
        bit = 1 << pos
        w = weights[e]
        for x in range(bit):
            table[bit | x] = table[x] + w
    return table


@dataclass(frozen=True)
class Additive(Valuation):
    weights: tuple[Fraction, ...]
    ground: ItemSet = field(init=False, compare=False, repr=False)

    def __init__(self, weights: Iterable):
        object.__setattr__(self, "weights", _check_weights(weights))
        object.__setattr__(self, "ground", (1 << len(self.weights)) - 1)

    def _value(self, mask):
        w = self.weights
        return sum((w[e] for e in iter_members(mask)), ZERO)

    def _table(self, items):
        return _additive_table(self.weights, items)


@dataclass(frozen=True)
class Xos(Valuation):
    """Pointwise maximum of additive clauses (all over the same items)."""

    clauses: tuple[tuple[Fraction, ...], ...]
    ground: ItemSet = field(init=False, compare=False, repr=False)

    def __init__(self, clauses: Iterable[Iterable]):
        cl = tuple(_check_weights(c) for c in clauses)
        if not cl:
            raise MalformedValuationError("XOS valuation needs at least one clause")
        if len({len(c) for c in cl}) != 1:
            raise MalformedValuationError("XOS clauses must have equal length")
        object.__setattr__(self, "clauses", cl)
        object.__setattr__(self, "ground", (1 << len(cl[0])) - 1)

    def _value(self, mask):
        its = members(mask)
        return max(sum((c[e] for e in its), ZERO) for c in self.clauses)

    def _table(self, items):
        best = _additive_table(self.clauses[0], items)
        for c in self.clauses[1:]:
            t = _additive_table(c, items)
            best = [a if a >= b else b for a, b in zip(best, t)]
        return best


@dataclass(frozen=True)
class Explicit(Valuation):
    """Complete table from subset code to value.

    ``require`` optionally names an axiom class (``"monotone"`` or
    ``"subadditive"``) that the table must satisfy; a failing table raises
    :class:`MalformedValuationError` rather than being repaired.
    """

    table: Mapping[int, Fraction]
    ground: ItemSet

    def __init__(self, table: Mapping, ground: int | Iterable[int] | None = None,
                 require: str | None = None):
        tab = {int(k): to_fraction(v) for k, v in table.items()}
        if ground is None:
            ground = reduce(lambda a, b: a | b, tab, 0)
        g = as_mask(ground)
        if g.bit_length() > MAX_EXPLICIT_ITEMS:
            raise ResourceLimitError(
                f"explicit tables are limited to {MAX_EXPLICIT_ITEMS} items"
            )
        for k in tab:
            if k & ~g:
                raise DomainError(f"table key {k} lies outside the ground set")
        if tab.get(0, ZERO) != 0:
            raise MalformedValuationError("value of the empty set must be 0")
        tab.setdefault(0, ZERO)
        object.__setattr__(self, "table", tab)
        object.__setattr__(self, "ground", g)
        if require is not None:
            report = check_axioms(self, require)
            if not report.ok:
                raise MalformedValuationError(f"table fails {require}: {report}")

    def _value(self, mask):
        try:
            return self.table[mask]
        except KeyError:
            raise MalformedValuationError(f"explicit table has no entry for subset {mask}") from None

    def is_complete(self) -> bool:
        return all(s in self.table for s in submasks(self.ground))


# -- derived views ---------------------------------------------------------


@dataclass(frozen=True)
class Marginal(Valuation):
    """``T -> base(T | held) - base(held)``."""

    base: Valuation
    held: ItemSet
    ground: ItemSet = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ground", self.base.ground)
        self.base.value(self.held)
        object.__setattr__(self, "_offset", self.base.value(self.held))

    def _value(self, mask):
        return self.base.value(mask | self.held) - self._offset


@dataclass(frozen=True)
class Conjugate(Valuation):
    """``T -> base(M) - base(M \\ T)`` for ``T`` inside ``M``."""

    base: Valuation
    universe: ItemSet
    ground: ItemSet = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ground", self.universe)
        object.__setattr__(self, "_top", self.base.value(self.universe))

    def _value(self, mask):
        return self._top - self.base.value(self.universe & ~mask)


@dataclass(frozen=True)
class Restriction(Valuation):
    base: Valuation
    domain: ItemSet
    ground: ItemSet = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.domain & ~self.base.ground:
            raise DomainError("restriction domain exceeds the base ground set")
        object.__setattr__(self, "ground", self.domain)

    def _value(self, mask):
        return self.base.value(mask)

    def _table(self, items):
        return self.base._table(items)


class Pullback(Valuation):
    """Values a set of new labels by the base value of the labels' images.

    ``mapping[x]`` is the base item behind label ``x`` or ``None`` for a label
    worth nothing to anyone (auxiliary edges).  Several labels may share an
    image; duplicates add nothing.
    """

    def __init__(self, base: Valuation, mapping: Mapping[int, int | None]):
        self.base = base
        self.mapping = dict(mapping)
        self.ground = as_mask(self.mapping)
        for x, e in self.mapping.items():
            if e is not None and not (base.ground >> e & 1):
                raise DomainError(f"label {x} maps to item {e} outside the base ground set")

    def image(self, mask: ItemSet) -> ItemSet:
        out = 0
        for x in iter_members(mask):
            e = self.mapping[x]
            if e is not None:
                out |= 1 << e
        return out

    def _value(self, mask):
        return self.base.value(self.image(mask))

    def __repr__(self):
        return f"Pullback({self.base!r}, {self.mapping!r})"


# -- operations ------------------------------------------------------------


def evaluate(v: Valuation, items) -> Fraction:
    return v.value(items)


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: str
    witness: tuple[ItemSet, ItemSet] | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return f"{self.axiom}: pass"
        s, t = self.witness
        return f"{self.axiom}: fail at S={members(s)}, T={members(t)} ({self.detail})"


AXIOMS = ("monotone", "subadditive")


def check_axioms(v: Valuation, axiom: str, items: int | Iterable[int] | None = None) -> AxiomReport:
    """Exhaustively test ``axiom`` on every subset of ``items`` (default: ground set).

    Monotonicity is checked on all pairs ``(T \\ {e}, T)``, which implies it for
    all nested pairs.  Subadditivity is checked on disjoint pairs, which
    suffices once monotonicity holds; so the subadditive check runs the
    monotone check first.  Witness pairs are reported as ``(S, T)`` masks.
    """
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {AXIOMS}")
    dom = v.ground if items is None else as_mask(items)
    its = members(dom)
    if len(its) > MAX_EXPLICIT_ITEMS:
        raise ResourceLimitError(f"axiom checks are limited to {MAX_EXPLICIT_ITEMS} items")
    if isinstance(v, Explicit):
        missing = [s for s in submasks(dom) if s not in v.table]
        if missing:
            raise MalformedValuationError(f"explicit table is missing subset {missing[0]}")
    table = v.local_table(its)
    k = len(its)
    gm = global_masks(its)
    if table[0] != 0:
        return AxiomReport(False, axiom, (0, 0), f"v(empty) = {table[0]}")
    for x in range(1, 1 << k):
        rest = x
        while rest:
            low = rest & -rest
            rest ^= low
            if table[x ^ low] > table[x]:
                return AxiomReport(
                    False, "monotone", (gm[x ^ low], gm[x]),
                    f"{table[x ^ low]} > {table[x]}",
                )
    if axiom == "monotone":
        return AxiomReport(True, axiom)
    for u in range(1, 1 << k):
        s = (u - 1) & u
        while s:
            t = u ^ s
            if s < t and table[s] + table[t] < table[u]:
                return AxiomReport(
                    False, "subadditive", (gm[s], gm[t]),
                    f"{table[s]} + {table[t]} < {table[u]}",
                )
            s = (s - 1) & u
    return AxiomReport(True, axiom)


def max_item_value(v: Valuation, items) -> Fraction:
    """Largest singleton value inside ``items``; 0 for the empty set."""
    mask = as_mask(items)
    return max((v.value(1 << e) for e in iter_members(mask)), default=ZERO)


def marginal_delta(v: Valuation, items) -> Fraction:
    """``max_e v(M) - v(M \\ {e})`` over ``e`` in ``M``; 0 for the empty set."""
    mask = as_mask(items)
    top = v.value(mask)
    return max((top - v.value(mask & ~(1 << e)) for e in iter_members(mask)), default=ZERO)


def conjugate(v: Valuation, items) -> Conjugate:
    mask = as_mask(items)
    if mask & ~v.ground:
        raise DomainError("conjugate universe exceeds the ground set")
    return Conjugate(v, mask)


def marginal(v: Valuation, held) -> Valuation:
    mask = as_mask(held)
    if mask & ~v.ground:
        raise DomainError("marginal base set exceeds the ground set")
    return Marginal(v, mask)


def restrict(v: Valuation, items) -> Restriction:
    return Restriction(v, as_mask(items))


def scaled_table(table: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integer table ``t`` and denominator ``q`` with ``table[x] == t[x] / q``."""
    q = 1
    for x in table:
        q = math.lcm(q, x.denominator)
    return [x.numerator * (q // x.denominator) for x in table], q
