import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from rosenets.datasets import random_graph
from rosenets.graph import DirectedGraph, GraphError, induced_edge_set
from rosenets.utility import (
    EvalCounter, ModularSum, ProbabilisticCoverage, make_utility, residual_value, sequence_value,
)
from rosenets.validation import audit_submodularity

from conftest import A, B, C, D, E, F, G, TOL


def coverage_by_hand(g, es):
    """Direct transcription of sum_j [1 - prod (1 - w_ij)] over every element j."""
    total = 0.0
    for j in range(g.n_elements):
        prod = 1.0
        for (t, h) in es:
            if h == j:
                prod *= 1.0 - g.weight(t, h)
        total += 1.0 - prod
    return total


@pytest.fixture
def two_into_c():
    return DirectedGraph(3, [(0, 2, 0.5), (1, 2, 0.5)])


def test_modular_value_of_greedy_sequence(fig2):
    h = make_utility("modular", fig2)
    assert h.evaluate(induced_edge_set(fig2, (A, B, C, E, F))) == pytest.approx(3.6, abs=TOL)


def test_empty_set_is_zero(fig2):
    for kind in ("modular", "coverage"):
        assert make_utility(kind, fig2).evaluate(frozenset()) == 0.0


def test_coverage_two_edges_into_one_head(two_into_c):
    h = ProbabilisticCoverage(two_into_c)
    assert h.evaluate({(0, 2), (1, 2)}) == pytest.approx(0.75, abs=TOL)
    assert h.marginal((1, 2), frozenset({(0, 2)})) == pytest.approx(0.25, abs=TOL)


def test_marginals(fig2, two_into_c):
    m = ModularSum(two_into_c)
    assert m.marginal((0, 2), frozenset()) == 0.5
    assert m.marginal((0, 2), frozenset({(1, 2)})) == 0.5
    for h in (ModularSum(fig2), ProbabilisticCoverage(fig2)):
        assert h.marginal((A, B), frozenset({(A, B)})) == 0.0


def test_foreign_edges_raise(fig2):
    h = make_utility("coverage", fig2)
    with pytest.raises(GraphError):
        h.evaluate({(A, G)})
    with pytest.raises(GraphError):
        h.marginal((G, A), frozenset())


def test_unknown_kind(fig2):
    with pytest.raises(ValueError):
        make_utility("facility", fig2)


def test_sequence_values(fig2_modular):
    g, h = fig2_modular
    assert sequence_value(h, g, (A, B, C, D, G)) == pytest.approx(0.9 + 0.9 + 0.5 + 0.5 + 0.5, abs=TOL)
    assert sequence_value(h, g, (A, B, C, E, F)) == pytest.approx(3.6, abs=TOL)
    assert sequence_value(h, g, ()) == 0.0


def test_residual_values(fig2_modular):
    g, h = fig2_modular
    assert residual_value(h, g, (A, B, C, E, F), {B, E}) == pytest.approx(0.0, abs=TOL)
    assert residual_value(h, g, (A, B, C, D, G), {B, C}) == pytest.approx(0.5, abs=TOL)
    assert residual_value(h, g, (A, B, C, D, G), ()) == sequence_value(h, g, (A, B, C, D, G))


def test_counter_counts_marginals_and_evaluations(fig2):
    h = make_utility("coverage", fig2)
    c = EvalCounter()
    h.marginal((A, B), frozenset(), c)
    h.evaluate(frozenset(), c)
    assert c.calls == 2
    c.reset()
    assert c.calls == 0


graphs = st.builds(
    lambda seed, n, m: random_graph(random.Random(seed), n, m, False, 0.3),
    st.integers(0, 10**6), st.integers(2, 6), st.integers(1, 8),
)


@settings(max_examples=60, deadline=None)
@given(g=graphs, data=st.data())
def test_coverage_matches_direct_formula(g, data):
    keys = [e.key for e in g.edges]
    es = frozenset(data.draw(st.lists(st.sampled_from(keys), unique=True)))
    h = ProbabilisticCoverage(g)
    assert h.evaluate(es) == pytest.approx(coverage_by_hand(g, es), abs=TOL)
    heads = {hd for _, hd in es}
    assert h.evaluate(es) <= len(heads) + TOL
    for key in keys:
        expect = h.evaluate(es | {key}) - h.evaluate(es)
        assert h.marginal(key, es) == pytest.approx(expect, abs=TOL)


@settings(max_examples=40, deadline=None)
@given(g=graphs)
def test_both_kinds_monotone_submodular(g):
    if g.n_edges > 10:
        g = DirectedGraph(g.n_elements, g.edges[:10])
    for kind in ("coverage", "modular"):
        assert audit_submodularity(make_utility(kind, g)).holds


def test_coverage_reaches_head_count_only_with_unit_weights():
    g = DirectedGraph(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 0.5)])
    h = ProbabilisticCoverage(g)
    assert h.evaluate({(0, 1), (0, 2)}) == 2.0
    assert h.evaluate({(1, 2)}) < 1.0


def test_audit_catches_non_submodular_function():
    g = DirectedGraph(3, [(0, 1, 0.5), (1, 2, 0.5)])

    class Supermodular(ModularSum):
        def _value(self, es):
            return float(len(es) ** 2)

    assert not audit_submodularity(Supermodular(g)).holds
