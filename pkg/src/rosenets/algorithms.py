"""Sequence Greedy, the two-phase robust greedy (RoseNets), OMegA and Frequency."""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence as SeqType

from .graph import DirectedGraph, Edge, Sequence, validate_sequence
from .utility import EdgeSetFunction, EvalCounter, sequence_value

log = logging.getLogger(__name__)

ALGORITHMS = ("frequency", "omega", "rosenets", "sequence")


@dataclass(frozen=True)
class GreedyContext:
    """Constraints for one greedy phase.

    ``forbidden`` elements are never appended and never serve as edge tails.
    ``base`` is a virtual prefix: its elements count as already selected (they
    can be tails and their induced edges enter the marginals) but they are not
    part of the returned sequence and do not use budget.
    """

    forbidden: frozenset = frozenset()
    base: Sequence = ()

    def __post_init__(self):
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))
        object.__setattr__(self, "base", tuple(self.base))
        if self.forbidden & set(self.base):
            raise ValueError("base sequence and forbidden elements overlap")


@dataclass
class AlgorithmResult:
    sequence: Sequence
    eval_calls: int = 0
    phase_boundary: int | None = None
    notes: list[str] = field(default_factory=list)


def _argmax_edge(scored: list[tuple[float, Edge]]) -> Edge:
    # max gain, then smaller tail, then smaller head
    best_gain, best = scored[0]
    for gain, e in scored[1:]:
        if gain > best_gain or (gain == best_gain and (e.tail, e.head) < (best.tail, best.head)):
            best_gain, best = gain, e
    return best


def sequence_greedy(
    g: DirectedGraph,
    h: EdgeSetFunction,
    budget: int,
    ctx: GreedyContext | None = None,
    counter: EvalCounter | None = None,
    observer: Callable[[list[Edge]], None] | None = None,
) -> Sequence:
    """Edge-driven greedy: repeatedly take the edge of largest marginal gain.

    Appends the head alone when the tail is already selected (or the edge is a
    self-loop), otherwise tail then head. With one slot left only edges whose
    tail is selected, or self-loops, qualify. Stops early when no edge
    qualifies.
    """
    if budget < 0:
        raise ValueError(f"budget must be non-negative, got {budget}")
    ctx = ctx or GreedyContext()
    forbidden = ctx.forbidden
    chosen = set(ctx.base)
    selected: list[int] = []
    es: set = set()
    # edges induced by the virtual prefix
    pos = {v: i for i, v in enumerate(ctx.base)}
    for v in ctx.base:
        for e in g.out_edges(v):
            if e.head in pos and pos[e.head] >= pos[v]:
                es.add(e.key)

    def append(v: int) -> None:
        chosen.add(v)
        selected.append(v)
        for e in g.in_edges(v):
            if e.tail in chosen:
                es.add(e.key)

    while len(selected) < budget:
        last_slot = budget - len(selected) == 1
        if last_slot:
            cands = [
                e for e in g.edges
                if e.head not in chosen and e.head not in forbidden
                and (e.tail == e.head or e.tail in chosen)
            ]
        else:
            cands = [
                e for e in g.edges
                if e.head not in chosen and e.head not in forbidden and e.tail not in forbidden
            ]
        if observer is not None:
            observer(cands)
        if not cands:
            break
        best = _argmax_edge([(h.marginal(e, es, counter), e) for e in cands])
        if best.tail != best.head and best.tail not in chosen:
            append(best.tail)
        append(best.head)
    return tuple(selected)


def rosenets(
    g: DirectedGraph,
    h: EdgeSetFunction,
    k: int,
    tau: int,
    history: SeqType[int] = (),
    seed_history: bool = True,
    observer: Callable[[list[Edge]], None] | None = None,
) -> AlgorithmResult:
    """Two independent greedy phases of tau and k - tau elements.

    The second phase cannot pick or build on anything from the first, so the
    value of the concatenation is not concentrated in the first phase.
    """
    if k < 0 or tau < 0:
        raise ValueError("k and tau must be non-negative")
    if tau > k:
        raise ValueError(f"tau={tau} exceeds k={k}")
    history = validate_sequence(g, history)
    counter = EvalCounter()
    base = history if seed_history else ()
    hidden = frozenset() if seed_history else frozenset(history)
    first = sequence_greedy(g, h, tau, GreedyContext(hidden, base), counter, observer)
    second = sequence_greedy(
        g, h, k - tau, GreedyContext(hidden | set(first), base), counter, observer
    )
    return AlgorithmResult(first + second, counter.calls, len(first))


def topological_order(
    g: DirectedGraph, items: SeqType[int], notes: list[str] | None = None
) -> Sequence:
    """Order ``items`` topologically along non-loop edges among them.

    Ties go to the element inserted earliest. Elements caught in a cycle keep
    their insertion order after the acyclic part.
    """
    rank = {v: i for i, v in enumerate(items)}
    indeg = {v: 0 for v in items}
    for v in items:
        for e in g.out_edges(v):
            if e.head in rank and e.head != v:
                indeg[e.head] += 1
    ready = [(rank[v], v) for v in items if indeg[v] == 0]
    heapq.heapify(ready)
    out: list[int] = []
    while ready:
        _, v = heapq.heappop(ready)
        out.append(v)
        for e in g.out_edges(v):
            if e.head in rank and e.head != v:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    heapq.heappush(ready, (rank[e.head], e.head))
    if len(out) < len(items):
        placed = set(out)
        rest = [v for v in items if v not in placed]
        msg = f"cycle among {rest}; kept insertion order"
        log.debug(msg)
        if notes is not None:
            notes.append(msg)
        out.extend(rest)
    return tuple(out)


def omega(
    g: DirectedGraph,
    h: EdgeSetFunction,
    k: int,
    ctx: GreedyContext | None = None,
    counter: EvalCounter | None = None,
    notes: list[str] | None = None,
) -> Sequence:
    """Element greedy that re-sorts the selection topologically after every pick.

    Each candidate is scored by the objective of the topologically re-sorted
    selection with the candidate included. Only elements incident to some edge
    are candidates. Reconstructed from a one-line description; treat as a
    best-effort baseline.
    """
    ctx = ctx or GreedyContext()
    excluded = set(ctx.base) | ctx.forbidden
    pool = [v for v in g.incident_elements() if v not in excluded]
    selection: Sequence = ()
    current = sequence_value(h, g, ctx.base, counter) if ctx.base else 0.0
    while len(selection) < k:
        best = None
        for v in pool:
            if v in selection:
                continue
            trial = topological_order(g, selection + (v,))
            value = sequence_value(h, g, ctx.base + trial, counter)
            if best is None or value - current > best[0]:
                best = (value - current, v, value)
        if best is None:
            break
        selection = topological_order(g, selection + (best[1],), notes)
        current = best[2]
    return selection


def popularity(g: DirectedGraph) -> list[float]:
    """Self-loop weight when the graph has self-loops, weighted in-degree otherwise."""
    pop = [0.0] * g.n_elements
    if g.has_self_loops():
        for e in g.edges:
            if e.is_self_loop:
                pop[e.head] = e.weight
    else:
        for e in g.edges:
            pop[e.head] += e.weight
    return pop


def frequency(g: DirectedGraph, k: int, history: SeqType[int] = ()) -> Sequence:
    pop = popularity(g)
    seen = set(history)
    ranked = sorted((v for v in range(g.n_elements) if v not in seen), key=lambda v: (-pop[v], v))
    return tuple(ranked[:max(k, 0)])


def run_algorithm(
    name: str,
    g: DirectedGraph,
    h: EdgeSetFunction,
    k: int,
    tau: int,
    history: SeqType[int] = (),
    seed_history: bool = True,
) -> AlgorithmResult:
    """Uniform entry point used by the experiment harness."""
    history = tuple(history)
    ctx = GreedyContext((), history) if seed_history else GreedyContext(history, ())
    if name == "rosenets":
        return rosenets(g, h, k, tau, history, seed_history)
    counter = EvalCounter()
    if name == "sequence":
        seq = sequence_greedy(g, h, k, ctx, counter)
        return AlgorithmResult(seq, counter.calls)
    if name == "omega":
        notes: list[str] = []
        seq = omega(g, h, k, ctx, counter, notes)
        return AlgorithmResult(seq, counter.calls, notes=notes)
    if name == "frequency":
        return AlgorithmResult(frequency(g, k, history))
    raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")
