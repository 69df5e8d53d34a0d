import pytest
from hypothesis import given, settings, strategies as st

from rosenets.datasets import random_graph
from rosenets.graph import (
    DirectedGraph, GraphError, degree_stats, induced_edge_set, remove_elements,
)

from conftest import A, B, C, D, E, F, G, brute_induced


def test_induced_edges_of_greedy_sequence(fig2):
    assert induced_edge_set(fig2, (A, B, C, E, F)) == {(A, B), (B, C), (B, E), (B, F)}


def test_induced_edges_empty_and_reversed(fig2):
    assert induced_edge_set(fig2, ()) == frozenset()
    assert induced_edge_set(fig2, (B, A)) == frozenset()


def test_induced_edges_include_self_loops():
    g = DirectedGraph(3, [(0, 0, 0.5), (1, 0, 0.2), (2, 2, 1.0)])
    assert induced_edge_set(g, (0, 1)) == {(0, 0)}
    assert induced_edge_set(g, (1, 0, 2)) == {(0, 0), (1, 0), (2, 2)}


@pytest.mark.parametrize("bad", [(7,), (-1,), (A, A)])
def test_induced_edges_rejects_bad_sequence(fig2, bad):
    with pytest.raises(GraphError):
        induced_edge_set(fig2, bad)


@pytest.mark.parametrize("s, z, expected", [
    ((A, B, C, D, G), {B}, (A, C, D, G)),
    ((A, B), {A, B}, ()),
    ((A, B, C), {99}, (A, B, C)),
])
def test_remove_elements(s, z, expected):
    assert remove_elements(s, z) == expected


def test_degree_stats_fig2(fig2):
    # independent count from the raw edge list
    ins, outs = {}, {}
    for e in fig2.edges:
        ins[e.head] = ins.get(e.head, 0) + 1
        outs[e.tail] = outs.get(e.tail, 0) + 1
    assert (max(ins.values()), max(outs.values())) == (2, 3)
    assert degree_stats(fig2) == (2, 3)


def test_degree_stats_edge_cases():
    assert degree_stats(DirectedGraph(0, [])) == (0, 0)
    loop = DirectedGraph(1, [(0, 0, 0.3)])
    assert degree_stats(loop, include_self_loops=True) == (1, 1)
    assert degree_stats(loop) == (0, 0)


@pytest.mark.parametrize("edges", [
    [(0, 1, 1.5)], [(0, 1, -0.1)], [(0, 5, 0.5)], [(0, 1, 0.5), (0, 1, 0.2)],
])
def test_graph_rejects_invalid_edges(edges):
    with pytest.raises(GraphError):
        DirectedGraph(2, edges)


def test_adjacency_matches_edges(rng):
    g = random_graph(rng, 8, 15, acyclic=False, self_loop_prob=0.3)
    for v in range(g.n_elements):
        assert set(g.out_edges(v)) == {e for e in g.edges if e.tail == v}
        assert set(g.in_edges(v)) == {e for e in g.edges if e.head == v}


graphs = st.builds(
    lambda seed, n, m, loops: random_graph(__import__("random").Random(seed), n, m, False, loops),
    st.integers(0, 10**6), st.integers(2, 8), st.integers(1, 20), st.sampled_from([0.0, 0.5]),
)


@settings(max_examples=150, deadline=None)
@given(g=graphs, data=st.data())
def test_induced_edge_set_properties(g, data):
    s = tuple(data.draw(st.permutations(range(g.n_elements))))
    s = s[:data.draw(st.integers(0, len(s)))]
    es = induced_edge_set(g, s)
    assert es == brute_induced(g, s)
    assert len(es) <= g.n_edges
    for i in range(len(s) + 1):
        assert induced_edge_set(g, s[:i]) <= es
    for v in s:
        if g.has_edge(v, v):
            assert (v, v) in es
    z = set(data.draw(st.lists(st.integers(0, g.n_elements - 1), max_size=3)))
    assert remove_elements(s, ()) == s
    assert remove_elements(remove_elements(s, z), z) == remove_elements(s, z)


def test_isolated_insertion_keeps_edge_set():
    g = DirectedGraph(4, [(0, 1, 0.5), (1, 2, 0.5)])
    assert induced_edge_set(g, (0, 3, 1, 2)) == induced_edge_set(g, (0, 1, 2))
