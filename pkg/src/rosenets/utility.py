"""Monotone submodular edge-set functions and the sequence objective built on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence as SeqType

from .graph import DirectedGraph, Edge, EdgeKey, GraphError, induced_edge_set, remove_elements

UTILITY_KINDS = ("coverage", "modular")


@dataclass
class EvalCounter:
    """Number of h evaluations (marginals included) made during one algorithm run."""

    calls: int = 0

    def tick(self, n: int = 1) -> None:
        self.calls += n

    def reset(self) -> None:
        self.calls = 0


class EdgeSetFunction:
    """Base class for h: 2^E -> R>=0 bound to one graph."""

    kind = ""

    def __init__(self, graph: DirectedGraph):
        self.graph = graph

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.graph!r})"

    def _check(self, es: Iterable[EdgeKey]) -> None:
        for key in es:
            if not self.graph.has_edge(*key):
                raise GraphError(f"{key} is not an edge of the bound graph")

    def evaluate(self, es: Iterable[EdgeKey], counter: EvalCounter | None = None) -> float:
        es = frozenset(es)
        self._check(es)
        if counter is not None:
            counter.tick()
        return self._value(es)

    def marginal(
        self, e: Edge | EdgeKey, es: frozenset[EdgeKey], counter: EvalCounter | None = None
    ) -> float:
        """h(es + e) - h(es); zero when ``e`` is already in ``es``."""
        key = e.key if isinstance(e, Edge) else tuple(e)
        w = self.graph.weight(*key)
        if counter is not None:
            counter.tick()
        if key in es:
            return 0.0
        return self._gain(key, w, es)

    def _value(self, es: frozenset[EdgeKey]) -> float:
        raise NotImplementedError

    def _gain(self, key: EdgeKey, w: float, es: frozenset[EdgeKey]) -> float:
        raise NotImplementedError


class ModularSum(EdgeSetFunction):
    """Sum of edge weights."""

    kind = "modular"

    def _value(self, es):
        return float(sum(self.graph.weight(t, h) for t, h in sorted(es)))

    def _gain(self, key, w, es):
        return w


class ProbabilisticCoverage(EdgeSetFunction):
    """sum over heads j of 1 - prod_{(i,j) in es} (1 - w_ij).

    Heads without an incoming member contribute nothing, so only covered heads
    are visited.
    """

    kind = "coverage"

    def _value(self, es):
        miss: dict[int, float] = {}
        for t, h in sorted(es):
            miss[h] = miss.get(h, 1.0) * (1.0 - self.graph.weight(t, h))
        return float(sum(1.0 - m for m in miss.values()))

    def _uncovered(self, head: int, es: frozenset[EdgeKey]) -> float:
        m = 1.0
        for e in self.graph.in_edges(head):
            if e.key in es:
                m *= 1.0 - e.weight
        return m

    def _gain(self, key, w, es):
        # uncovered mass of the head times the new edge's weight
        return w * self._uncovered(key[1], es)


def make_utility(kind: str, graph: DirectedGraph) -> EdgeSetFunction:
    if kind in ("coverage", "probabilistic_coverage"):
        return ProbabilisticCoverage(graph)
    if kind in ("modular", "modular_sum"):
        return ModularSum(graph)
    raise ValueError(f"unknown utility kind {kind!r}; expected one of {UTILITY_KINDS}")


def sequence_value(
    h: EdgeSetFunction, g: DirectedGraph, s: SeqType[int], counter: EvalCounter | None = None
) -> float:
    return h.evaluate(induced_edge_set(g, s), counter)


def residual_value(
    h: EdgeSetFunction,
    g: DirectedGraph,
    s: SeqType[int],
    z: Iterable[int],
    counter: EvalCounter | None = None,
) -> float:
    return sequence_value(h, g, remove_elements(s, z), counter)
