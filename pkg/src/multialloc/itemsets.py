"""Item sets encoded as characteristic integers.

Bit ``e`` of a mask is set when item ``e`` is a member.  The integer is the
canonical form: two sets are equal iff their masks are equal, and the decimal
rendering of the mask is the subset code used in instance files.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

ItemSet = int


def as_mask(items: int | Iterable[int]) -> ItemSet:
    """Return the characteristic integer of ``items``.

    Integers are taken to already be masks; any other iterable is read as a
    collection of item indices.
    """
    if isinstance(items, bool):
        raise TypeError("bool is not an item set")
    if isinstance(items, int):
        if items < 0:
            raise ValueError(f"negative mask {items}")
        return items
    mask = 0
    for e in items:
        if e < 0:
            raise ValueError(f"negative item index {e}")
        mask |= 1 << e
    return mask


def full(m: int) -> ItemSet:
    return (1 << m) - 1


def members(mask: ItemSet) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_members(mask: ItemSet) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def size(mask: ItemSet) -> int:
    return mask.bit_count()


def submasks(mask: ItemSet) -> Iterator[ItemSet]:
    """All subsets of ``mask``, in increasing order of their codes."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def expand(local: int, items: Sequence[int]) -> ItemSet:
    """Map a mask over positions ``0..len(items)-1`` to a mask over ``items``."""
    out = 0
    pos = 0
    while local:
        if local & 1:
            out |= 1 << items[pos]
        local >>= 1
        pos += 1
    return out


def compress(mask: ItemSet, items: Sequence[int]) -> int:
    """Inverse of :func:`expand` for masks contained in ``items``."""
    out = 0
    for pos, e in enumerate(items):
        if mask >> e & 1:
            out |= 1 << pos
    return out


def global_masks(items: Sequence[int]) -> list[ItemSet]:
    """``expand(x, items)`` for every local mask ``x`` in ``range(2**len(items))``."""
    table = [0] * (1 << len(items))
    for pos, e in enumerate(items):
        bit = 1 << pos
        g = 1 << e
        for x in range(bit):
            table[bit | x] = table[x] | g
    return table


def fmt(mask: ItemSet, one_based: bool = False) -> str:
    shift = 1 if one_based else 0
    return "{" + ",".join(f"e{e + shift}" for e in members(mask)) + "}"
