import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from rosenets.datasets import random_graph
from rosenets.graph import DirectedGraph
from rosenets.robustness import (
    InfeasibleError, prefix_removal, robust_value, worst_case_removal,
)
from rosenets.utility import make_utility

from conftest import A, B, C, D, E, F, G, TOL, brute_induced


def brute_worst(g, h, s, tau):
    """Scan every ordered choice of removed positions; independent of combinations()."""
    r = min(tau, len(s))
    best = None
    for picked in permutations(range(len(s)), r):
        rest = [v for i, v in enumerate(s) if i not in picked]
        val = h.evaluate(frozenset(brute_induced(g, rest)))
        best = val if best is None else min(best, val)
    return best


def test_fig2_greedy_output_collapses(fig2_modular):
    g, h = fig2_modular
    out = worst_case_removal(g, h, (A, B, C, E, F), 2)
    assert out.residual == pytest.approx(0.0, abs=TOL)
    assert B in out.removed


def test_fig2_robust_output_keeps_half(fig2_modular):
    g, h = fig2_modular
    out = worst_case_removal(g, h, (A, B, C, D, G), 2)
    assert out.residual == pytest.approx(0.5, abs=TOL)
    assert out.mode == "exact"
    assert len(out.removed) == 2


def test_prefix_removal_fig2(fig2_modular):
    g, h = fig2_modular
    out = prefix_removal(g, h, (A, B, C, D, G), 2)
    assert out.removed == {A, B}
    assert out.remaining == (C, D, G)
    assert out.residual == pytest.approx(1.5, abs=TOL)
    assert out.mode == "prefix"


def test_prefix_never_below_exact(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randint(2, 7), rng.randint(1, 14), acyclic=False, self_loop_prob=0.3)
        h = make_utility(rng.choice(["coverage", "modular"]), g)
        s = list(range(g.n_elements))
        rng.shuffle(s)
        s = s[:rng.randint(0, len(s))]
        tau = rng.randint(0, 4)
        assert prefix_removal(g, h, s, tau).residual >= worst_case_removal(g, h, s, tau).residual - TOL


def test_tau_larger_than_sequence_removes_everything(fig2_modular):
    g, h = fig2_modular
    out = worst_case_removal(g, h, (A, B), 5)
    assert out.removed == {A, B}
    assert out.residual == 0.0


def test_tie_break_smallest_ids():
    g = DirectedGraph(3, [(0, 0, 0.5), (1, 1, 0.5), (2, 2, 0.5)])
    h = make_utility("modular", g)
    assert worst_case_removal(g, h, (2, 1, 0), 1).removed == {0}


def test_cap_raises(fig2_modular):
    g, h = fig2_modular
    with pytest.raises(InfeasibleError):
        worst_case_removal(g, h, (A, B, C, D, E, F, G), 3, cap=10)


def test_negative_tau_rejected(fig2_modular):
    g, h = fig2_modular
    with pytest.raises(ValueError):
        worst_case_removal(g, h, (A,), -1)
    with pytest.raises(ValueError):
        prefix_removal(g, h, (A,), -1)


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    n = draw(st.integers(1, 6))
    g = random_graph(rng, n, draw(st.integers(0, 12)), acyclic=draw(st.booleans()),
                     self_loop_prob=draw(st.sampled_from([0.0, 0.5])))
    h = make_utility(draw(st.sampled_from(["coverage", "modular"])), g)
    s = draw(st.permutations(range(n)))
    s = s[:draw(st.integers(0, n))]
    return g, h, tuple(s), draw(st.integers(0, 4))


@settings(max_examples=150, deadline=None)
@given(instances())
def test_exact_matches_brute_force(inst):
    g, h, s, tau = inst
    assert worst_case_removal(g, h, s, tau).residual == pytest.approx(brute_worst(g, h, s, tau), abs=TOL)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_exactly_tau_equals_at_most_tau(inst):
    g, h, s, tau = inst
    exact = worst_case_removal(g, h, s, tau).residual
    upto = worst_case_removal(g, h, s, tau, at_most=True).residual
    assert exact == pytest.approx(upto, abs=TOL)


@settings(max_examples=100, deadline=None)
@given(instances())
def test_robust_value_non_increasing_in_tau(inst):
    g, h, s, _ = inst
    vals = [robust_value(g, h, s, t) for t in range(len(s) + 2)]
    assert all(a >= b - TOL for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 0.0
