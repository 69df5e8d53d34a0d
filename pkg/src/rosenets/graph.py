"""Directed graph model, induced edge sets and element removal.

Elements are dense integer ids ``0..n-1``. A sequence is a tuple of ids
without repeats; an edge set is a frozenset of ``(tail, head)`` pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence as SeqType

EdgeKey = tuple[int, int]
Sequence = tuple[int, ...]
EdgeSet = frozenset


class GraphError(ValueError):
    """Structural violation: bad id, foreign edge, duplicate edge, bad weight."""


@dataclass(frozen=True, order=True)
class Edge:
    tail: int
    head: int
    weight: float

    @property
    def key(self) -> EdgeKey:
        return (self.tail, self.head)

    @property
    def is_self_loop(self) -> bool:
        return self.tail == self.head


class DirectedGraph:
    """Immutable weighted digraph with optional self-loops.

    Edges are kept sorted by ``(tail, head)`` so every iteration over them is
    deterministic.
    """

    def __init__(
        self,
        n_elements: int,
        edges: Iterable[Edge | tuple[int, int, float]],
        labels: SeqType[str] | None = None,
    ):
        if n_elements < 0:
            raise GraphError(f"negative element count {n_elements}")
        self.n_elements = n_elements
        weights: dict[EdgeKey, float] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(int(e[0]), int(e[1]), float(e[2]))
            if not (0 <= e.tail < n_elements and 0 <= e.head < n_elements):
                raise GraphError(f"edge {e.key} has endpoint outside 0..{n_elements - 1}")
            if not 0.0 <= e.weight <= 1.0:
                raise GraphError(f"edge {e.key} weight {e.weight} outside [0, 1]")
            if e.key in weights:
                raise GraphError(f"duplicate edge {e.key}")
            weights[e.key] = e.weight
        self._weights = weights
        self.edges: tuple[Edge, ...] = tuple(
            Edge(t, h, w) for (t, h), w in sorted(weights.items())
        )
        out_adj: list[list[Edge]] = [[] for _ in range(n_elements)]
        in_adj: list[list[Edge]] = [[] for _ in range(n_elements)]
        for e in self.edges:
            out_adj[e.tail].append(e)
            in_adj[e.head].append(e)
        self._out = tuple(tuple(a) for a in out_adj)
        self._in = tuple(tuple(a) for a in in_adj)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n_elements:
                raise GraphError(f"{len(labels)} labels for {n_elements} elements")
        self.labels: tuple[str, ...] | None = labels

    def __repr__(self) -> str:
        return f"DirectedGraph(n_elements={self.n_elements}, n_edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n_elements == other.n_elements and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n_elements, self.edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, tail: int, head: int) -> bool:
        return (tail, head) in self._weights

    def weight(self, tail: int, head: int) -> float:
        try:
            return self._weights[(tail, head)]
        except KeyError:
            raise GraphError(f"({tail}, {head}) is not an edge of the graph") from None

    def out_edges(self, v: int) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: int) -> tuple[Edge, ...]:
        return self._in[v]

    def has_self_loops(self) -> bool:
        return any(e.is_self_loop for e in self.edges)

    def incident_elements(self) -> list[int]:
        """Elements touching at least one edge, ascending."""
        return [v for v in range(self.n_elements) if self._out[v] or self._in[v]]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


def validate_sequence(g: DirectedGraph, s: SeqType[int]) -> Sequence:
    s = tuple(int(v) for v in s)
    for v in s:
        if not 0 <= v < g.n_elements:
            raise GraphError(f"element {v} not in graph with {g.n_elements} elements")
    if len(set(s)) != len(s):
        raise GraphError(f"sequence {s} repeats an element")
    return s


def induced_edge_set(g: DirectedGraph, s: SeqType[int]) -> frozenset[EdgeKey]:
    """Edges (i, j) with i placed before j in ``s``, plus self-loops of members."""
    s = validate_sequence(g, s)
    pos = {v: i for i, v in enumerate(s)}
    out = []
    for v in s:
        pv = pos[v]
        for e in g.out_edges(v):
            pj = pos.get(e.head)
            if pj is not None and pj >= pv:
                out.append(e.key)
    return frozenset(out)


def remove_elements(s: SeqType[int], z: Iterable[int]) -> Sequence:
    z = set(z)
    return tuple(v for v in s if v not in z)


def degree_stats(g: DirectedGraph, include_self_loops: bool = False) -> tuple[int, int]:
    """Maximum in-degree and out-degree over all elements."""
    d_in = d_out = 0
    for v in range(g.n_elements):
        ins = sum(1 for e in g.in_edges(v) if include_self_loops or not e.is_self_loop)
        outs = sum(1 for e in g.out_edges(v) if include_self_loops or not e.is_self_loop)
        d_in = max(d_in, ins)
        d_out = max(d_out, outs)
    return d_in, d_out
