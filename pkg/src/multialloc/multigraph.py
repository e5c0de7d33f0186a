"""Width-2 multi-allocations as multigraphs, and the token allocation game.

Agents are vertices and every item held by exactly two agents is an edge
between them.  The token game allocates edges by orienting them: the agent
holding the token picks one of her unallocated incident edges and the token
walks to its other endpoint; an agent with nothing left to pick sends the
token jumping to another vertex.  Each agent picks by solving, on the spot,
the alternating picking game over her remaining incident edges (she moves
first) under her marginal valuation given what she already won.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .allocation import MultiAllocation
from .errors import PreconditionError
from .game import P, Q, omega_alternating
from .itemsets import ItemSet, as_mask, members
from .valuations import Pullback, Valuation, marginal, max_item_value


@dataclass(frozen=True)
class Edge:
    id: int
    a: int
    b: int
    item: int | None = None  # None marks an auxiliary edge

    @property
    def auxiliary(self) -> bool:
        return self.item is None

    def other(self, u: int) -> int:
        if u == self.a:
            return self.b
        if u == self.b:
            return self.a
        raise ValueError(f"vertex {u} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class MultiGraph:
    """Multigraph over ``n`` agents.  ``direct`` lists (agent, item) pairs of
    singly-held items; they are never edges and go straight to their holder."""

    n: int
    edges: tuple[Edge, ...]
    direct: tuple[tuple[int, int], ...] = ()
    _incident: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inc: list[list[int]] = [[] for _ in range(self.n)]
        ids = set()
        items = set()
        for k, e in enumerate(self.edges):
            if e.id != k:
                raise ValueError("edge ids must equal their position in the edge list")
            if e.a == e.b:
                raise ValueError(f"edge {e.id} is a self-loop")
            if not (0 <= e.a < self.n and 0 <= e.b < self.n):
                raise ValueError(f"edge {e.id} has an endpoint outside 0..{self.n - 1}")
            if e.item is not None:
                if e.item in items:
                    raise ValueError(f"item {e.item} appears on two edges")
                items.add(e.item)
            ids.add(e.id)
            inc[e.a].append(e.id)
            inc[e.b].append(e.id)
        for agent, item in self.direct:
            if item in items:
                raise ValueError(f"item {item} is both an edge and a direct allocation")
        object.__setattr__(self, "_incident", tuple(tuple(x) for x in inc))

    def incident(self, u: int) -> tuple[int, ...]:
        return self._incident[u]

    def degree(self, u: int) -> int:
        return len(self._incident[u])

    def odd_vertices(self) -> list[int]:
        return [u for u in range(self.n) if self.degree(u) % 2]

    def direct_items(self, u: int) -> ItemSet:
        return as_mask(item for agent, item in self.direct if agent == u)

    def local_items(self, u: int) -> ItemSet:
        """Real items incident with ``u`` plus her direct items."""
        mask = self.direct_items(u)
        for k in self._incident[u]:
            item = self.edges[k].item
            if item is not None:
                mask |= 1 << item
        return mask

    def real_edges(self) -> list[Edge]:
        return [e for e in self.edges if not e.auxiliary]


def from_two_multi(alloc: MultiAllocation) -> MultiGraph:
    """Edges for items with two holders, direct pairs for items with one."""
    edges = []
    direct = []
    for e in range(alloc.m):
        hs = alloc.holders(e)
        if len(hs) > 2:
            raise PreconditionError(f"item {e} is held by {len(hs)} agents; width must be <= 2")
        if len(hs) == 2:
            edges.append(Edge(len(edges), hs[0], hs[1], e))
        elif len(hs) == 1:
            direct.append((hs[0], e))
    return MultiGraph(alloc.n, tuple(edges), tuple(direct))


def pad_even(g: MultiGraph) -> MultiGraph:
    """Pair odd-degree vertices in index order with one auxiliary edge each."""
    odd = g.odd_vertices()
    edges = list(g.edges)
    for u, w in zip(odd[::2], odd[1::2]):
        edges.append(Edge(len(edges), u, w, None))
    return MultiGraph(g.n, tuple(edges), g.direct)


# -- token game --------------------------------------------------------------

JUMP = "JUMP"
PICK = "PICK"


@dataclass
class TokenTrace:
    events: list[tuple] = field(default_factory=list)

    def jump(self, v: int) -> None:
        self.events.append((JUMP, v))

    def pick(self, v: int, edge: int) -> None:
        self.events.append((PICK, v, edge))

    def to_text(self) -> str:
        return "".join(" ".join(map(str, ev)) + "\n" for ev in self.events)

    @classmethod
    def from_text(cls, text: str) -> TokenTrace:
        tr = cls()
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == JUMP and len(parts) == 2:
                tr.jump(int(parts[1]))
            elif parts[0] == PICK and len(parts) == 3:
                tr.pick(int(parts[1]), int(parts[2]))
            else:
                raise ValueError(f"bad trace line: {line!r}")
        return tr

    def phases(self) -> list[list[tuple]]:
        out: list[list[tuple]] = []
        for ev in self.events:
            if ev[0] == JUMP:
                out.append([ev])
            else:
                out[-1].append(ev)
        return out


@dataclass(frozen=True)
class Orientation:
    """Receiving endpoint of every edge."""

    receiver: dict[int, int]

    def bundles(self, g: MultiGraph) -> list[ItemSet]:
        """Real items received per agent, direct items included."""
        out = [g.direct_items(u) for u in range(g.n)]
        for k, u in self.receiver.items():
            item = g.edges[k].item
            if item is not None:
                out[u] |= 1 << item
        return out


JumpRule = Callable[[list[int]], int]


def lowest_vertex(candidates: list[int]) -> int:
    return candidates[0]


def _edge_view(v: Valuation, g: MultiGraph, won: ItemSet, edge_ids: Sequence[int]) -> Valuation:
    base = marginal(v, won) if won else v
    return Pullback(base, {k: g.edges[k].item for k in edge_ids})


def token_game(g: MultiGraph, valuations: Sequence[Valuation], start: int = 0,
               jump_rule: JumpRule = lowest_vertex) -> tuple[Orientation, TokenTrace]:
    """Run the walk/jump game to completion.

    ``valuations[u]`` values agent ``u``'s items by their labels (the
    ``item`` field of edges and direct pairs).  Direct items count as already
    won, so agents value edges marginally over them.  The first token
    placement is recorded as a jump to ``start`` (or, if ``start`` has no
    edges, to the vertex the jump rule selects).
    """
    odd = g.odd_vertices()
    if odd:
        raise PreconditionError(f"vertices {odd} have odd degree; run pad_even first")
    if len(valuations) != g.n:
        raise ValueError(f"{len(valuations)} valuations for {g.n} agents")
    if g.n and not 0 <= start < g.n:
        raise ValueError(f"start vertex {start} out of range")
    left = [set(g.incident(u)) for u in range(g.n)]
    won = [g.direct_items(u) for u in range(g.n)]
    receiver: dict[int, int] = {}
    trace = TokenTrace()
    remaining = len(g.edges)
    token = None
    while remaining:
        if token is None or not left[token]:
            candidates = [u for u in range(g.n) if left[u]]
            token = start if token is None and left[start] else jump_rule(candidates)
            if not left[token]:
                raise ValueError(f"jump rule chose vertex {token} with no unallocated edge")
            trace.jump(token)
            continue
        u = token
        ys = sorted(left[u])
        view = _edge_view(valuations[u], g, won[u], ys)
        k = omega_alternating(P, ys, view).pick(as_mask(ys))
        edge = g.edges[k]
        receiver[k] = u
        if edge.item is not None:
            won[u] |= 1 << edge.item
        w = edge.other(u)
        left[u].discard(k)
        left[w].discard(k)
        remaining -= 1
        trace.pick(u, k)
        token = w
    return Orientation(receiver), trace


def allocate_graph(g: MultiGraph, valuations: Sequence[Valuation], start: int = 0,
                   jump_rule: JumpRule = lowest_vertex):
    """``pad_even`` followed by :func:`token_game`; returns (padded graph, orientation, trace)."""
    padded = pad_even(g)
    orientation, trace = token_game(padded, valuations, start, jump_rule)
    return padded, orientation, trace


# -- certification -----------------------------------------------------------


@dataclass(frozen=True)
class GraphCertificate:
    agent: int
    value: Fraction
    local_value: Fraction
    delta: Fraction
    omega_q: Fraction
    half_gap: Fraction  # (v(local) - delta) / 2
    half_mms2: Fraction

    @property
    def pass_omega(self) -> bool:
        return self.value >= self.omega_q

    @property
    def pass_gap(self) -> bool:
        return self.value >= self.half_gap

    @property
    def pass_mms(self) -> bool:
        return self.value >= self.half_mms2

    @property
    def ok(self) -> bool:
        return self.pass_omega and self.pass_gap and self.pass_mms


def certify_graph_allocation(g: MultiGraph, valuations: Sequence[Valuation],
                             orientation: Orientation) -> list[GraphCertificate]:
    """Per-agent value against omega(S_q), (v - delta)/2 and MMS(., 2)/2.

    Every bound is computed on the agent's real local items: incident
    non-auxiliary edges plus direct items.
    """
    from .mms import mms

    for k, u in orientation.receiver.items():
        e = g.edges[k]
        if u not in (e.a, e.b):
            raise ValueError(f"edge {k} oriented to non-endpoint {u}")
    if set(orientation.receiver) != {e.id for e in g.edges}:
        raise ValueError("orientation does not cover every edge exactly once")
    bundles = orientation.bundles(g)
    out = []
    for u in range(g.n):
        v = valuations[u]
        local = g.local_items(u)
        val = v.value(bundles[u])
        top = v.value(local)
        delta = max_item_value(v, local)
        wq = omega_alternating(Q, local, v).omega
        half_mms2 = mms(local, v, 2) / 2
        out.append(GraphCertificate(u, val, top, delta, wq, (top - delta) / 2, half_mms2))
    return out


def local_alternation_ok(g: MultiGraph, trace: TokenTrace) -> bool:
    """Between two consecutive picks by one agent inside a phase, exactly one
    of her incident edges was taken by someone else (the edge that walked the
    token in)."""
    for phase in trace.phases():
        last_pick_index: dict[int, int] = {}
        taken_since: dict[int, int] = {}
        for ev in phase[1:]:
            _, u, k = ev
            e = g.edges[k]
            w = e.other(u)
            if u in last_pick_index and taken_since.get(u, 0) != 1:
                return False
            last_pick_index[u] = k
            taken_since[u] = 0
            taken_since[w] = taken_since.get(w, 0) + 1
    return True


def trace_valid(g: MultiGraph, trace: TokenTrace) -> list[str]:
    """Structural problems of a trace (empty list when valid)."""
    problems = []
    left = [set(g.incident(u)) for u in range(g.n)]
    picked = set()
    token = None
    for phase in trace.phases():
        start = phase[0][1]
        if token is not None and left[token]:
            problems.append(f"jump from vertex {token} which still had edges")
        token = start
        for ev in phase[1:]:
            _, u, k = ev
            if u != token:
                problems.append(f"vertex {u} picked without holding the token")
            if k in picked or k not in left[u]:
                problems.append(f"edge {k} not available to vertex {u}")
                continue
            picked.add(k)
            w = g.edges[k].other(u)
            left[u].discard(k)
            left[w].discard(k)
            token = w
        if phase[1:] and token != start:
            problems.append(f"phase starting at {start} ended at {token}")
    if len(picked) != len(g.edges):
        problems.append(f"{len(g.edges) - len(picked)} edges never picked")
    return problems
