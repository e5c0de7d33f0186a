import random

import pytest

from multialloc import (
    Additive,
    Edge,
    MultiAllocation,
    MultiGraph,
    PreconditionError,
    TokenTrace,
    allocate_graph,
    certify_graph_allocation,
    from_two_multi,
    omega_alternating,
    pad_even,
    token_game,
)
from multialloc.game import Q
from multialloc.harness.generate import random_graph_instance
from multialloc.multigraph import local_alternation_ok, trace_valid

from conftest import pair_max


def test_parallel_edges_from_shared_items():
    g = from_two_multi(MultiAllocation.from_lists([[0, 1], [0, 1]]))
    assert [(e.a, e.b, e.item) for e in g.edges] == [(0, 1, 0), (0, 1, 1)]


def test_singly_held_items_are_direct():
    g = from_two_multi(MultiAllocation.from_lists([[], [], [], [0]], 1))
    assert g.edges == () and g.direct == ((3, 0),)


def test_unheld_items_dropped_and_width_checked():
    g = from_two_multi(MultiAllocation((0, 0), 2))
    assert g.edges == () and g.direct == ()
    with pytest.raises(PreconditionError):
        from_two_multi(MultiAllocation.from_lists([[0], [0], [0]]))


def test_intro_d2_single_edge():
    g = from_two_multi(MultiAllocation.from_lists([[0], [0]]))
    assert len(g.edges) == 1


def test_pad_even_cases():
    path = MultiGraph(2, (Edge(0, 0, 1, 0),))
    p = pad_even(path)
    assert len(p.edges) == 2 and p.edges[1].auxiliary and p.degree(0) == 2
    tri = MultiGraph(3, (Edge(0, 0, 1, 0), Edge(1, 1, 2, 1), Edge(2, 0, 2, 2)))
    assert pad_even(tri).edges == tri.edges
    star = MultiGraph(4, (Edge(0, 0, 1, 0), Edge(1, 0, 2, 1), Edge(2, 0, 3, 2)))
    ps = pad_even(star)
    aux = [e for e in ps.edges if e.auxiliary]
    assert [(e.a, e.b) for e in aux] == [(0, 1), (2, 3)]
    assert not ps.odd_vertices()


def test_graph_validation():
    with pytest.raises(ValueError):
        MultiGraph(2, (Edge(0, 1, 1, 0),))
    with pytest.raises(ValueError):
        MultiGraph(2, (Edge(0, 0, 1, 0), Edge(1, 0, 1, 0)))


def test_token_game_requires_even_degrees():
    g = MultiGraph(2, (Edge(0, 0, 1, 0),))
    with pytest.raises(PreconditionError):
        token_game(g, [Additive([1])] * 2)


def test_intro_d2_instance():
    g = from_two_multi(MultiAllocation.from_lists([[0], [0]]))
    vals = [Additive([1])] * 2
    padded, orient, trace = allocate_graph(g, vals)
    bundles = orient.bundles(padded)
    assert sorted(v.value(b) for v, b in zip(vals, bundles)) == [0, 1]
    certs = certify_graph_allocation(padded, vals, orient)
    assert all(c.ok for c in certs)
    assert all(c.half_gap == 0 for c in certs)


def test_two_parallel_unit_edges_split():
    g = from_two_multi(MultiAllocation.from_lists([[0, 1], [0, 1]]))
    vals = [Additive([1, 1])] * 2
    padded, orient, _ = allocate_graph(g, vals)
    certs = certify_graph_allocation(padded, vals, orient)
    assert [c.value for c in certs] == [1, 1]
    assert [c.omega_q for c in certs] == [1, 1]


def test_pair_max_agent_is_tight():
    # agent 0 holds e1..e4, each shared with one of four other agents
    alloc = MultiAllocation.from_lists([[0, 1, 2, 3], [0], [1], [2], [3]], 4)
    vals = [pair_max()] + [Additive([1, 1, 1, 1])] * 4
    padded, orient, _ = allocate_graph(from_two_multi(alloc), vals)
    c = certify_graph_allocation(padded, vals, orient)[0]
    assert c.omega_q == 1 and c.half_mms2 == 1
    assert c.ok


def test_isolated_agent_passes_with_zero():
    alloc = MultiAllocation.from_lists([[0], [0], []], 1)
    vals = [Additive([1])] * 3
    padded, orient, _ = allocate_graph(from_two_multi(alloc), vals)
    c = certify_graph_allocation(padded, vals, orient)[2]
    assert (c.value, c.omega_q, c.half_gap, c.half_mms2) == (0, 0, 0, 0) and c.ok


def test_trace_text_roundtrip_and_format():
    g = from_two_multi(MultiAllocation.from_lists([[0, 1], [0, 1]]))
    _, _, trace = allocate_graph(g, [Additive([2, 1])] * 2)
    text = trace.to_text()
    assert text.splitlines()[0] == "JUMP 0"
    assert all(line.split()[0] in ("JUMP", "PICK") for line in text.splitlines())
    assert TokenTrace.from_text(text).events == trace.events
    with pytest.raises(ValueError):
        TokenTrace.from_text("WALK 1\n")


def test_start_vertex_flag():
    g = from_two_multi(MultiAllocation.from_lists([[0, 1], [0, 1]]))
    _, _, trace = allocate_graph(g, [Additive([2, 1])] * 2, start=1)
    assert trace.events[0] == ("JUMP", 1)
    assert trace.events[1] == ("PICK", 1, 0)


def test_random_graphs_certify_and_traces_valid():
    rng = random.Random(5)
    for _ in range(40):
        inst = random_graph_instance(rng, rng.randint(2, 5), 6)
        g = inst.graph()
        jr = random.Random(rng.random())
        padded, orient, trace = allocate_graph(g, inst.valuations, 0, lambda c: jr.choice(c))
        assert not trace_valid(padded, trace)
        assert local_alternation_ok(padded, trace)
        for c in certify_graph_allocation(padded, inst.valuations, orient):
            assert c.ok
            assert c.omega_q == omega_alternating(Q, padded.local_items(c.agent),
                                                  inst.valuations[c.agent]).omega
        bundles = orient.bundles(padded)
        for u in range(g.n):
            for w in range(u + 1, g.n):
                assert bundles[u] & bundles[w] == 0


def test_reported_bundles_exclude_auxiliary_edges():
    g = from_two_multi(MultiAllocation.from_lists([[0], [0]]))
    padded, orient, _ = allocate_graph(g, [Additive([1])] * 2)
    assert sum(b.bit_count() for b in orient.bundles(padded)) == 1


def test_trace_valid_flags_problems():
    g = pad_even(from_two_multi(MultiAllocation.from_lists([[0], [0]])))
    bad = TokenTrace()
    bad.jump(0)
    bad.pick(1, 0)
    assert trace_valid(g, bad)
