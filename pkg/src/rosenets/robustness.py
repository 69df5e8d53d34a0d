"""Adversarial element removal: exact worst case and first-tau prefix removal."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence as SeqType

from .graph import DirectedGraph, Sequence, remove_elements
from .utility import EdgeSetFunction, EvalCounter, sequence_value

EXACT_CAP = 10**7
TIE_TOL = 1e-12


class InfeasibleError(RuntimeError):
    """Exhaustive enumeration would exceed its size cap."""


@dataclass(frozen=True)
class RemovalOutcome:
    removed: frozenset
    residual: float
    mode: str
    remaining: Sequence = ()


def worst_case_removal(
    g: DirectedGraph,
    h: EdgeSetFunction,
    s: SeqType[int],
    tau: int,
    at_most: bool = False,
    cap: int = EXACT_CAP,
    counter: EvalCounter | None = None,
) -> RemovalOutcome:
    """Minimum of f(s - Z) over Z subset of s with |Z| = min(tau, |s|).

    Removing exactly tau elements suffices because f only loses edges when an
    element is dropped. ``at_most=True`` also scans smaller Z, which is how that
    claim is checked. Ties go to the lexicographically smallest sorted id set.
    """
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    s = tuple(s)
    r = min(tau, len(s))
    sizes = range(r + 1) if at_most else (r,)
    total = sum(comb(len(s), i) for i in sizes)
    if total > cap:
        raise InfeasibleError(f"{total} removal sets exceed the cap of {cap}")
    best: tuple[float, tuple[int, ...]] | None = None
    ids = sorted(s)
    for size in sizes:
        for z in combinations(ids, size):
            val = sequence_value(h, g, remove_elements(s, z), counter)
            if best is None or val < best[0] - TIE_TOL or (
                abs(val - best[0]) <= TIE_TOL and z < best[1]
            ):
                best = (val, z)
    assert best is not None
    z = frozenset(best[1])
    return RemovalOutcome(z, best[0], "exact", remove_elements(s, z))


def prefix_removal(
    g: DirectedGraph,
    h: EdgeSetFunction,
    s: SeqType[int],
    tau: int,
    counter: EvalCounter | None = None,
) -> RemovalOutcome:
    """Drop the first tau elements and score what is left."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    s = tuple(s)
    rest = s[tau:]
    return RemovalOutcome(frozenset(s[:tau]), sequence_value(h, g, rest, counter), "prefix", rest)


def robust_value(g: DirectedGraph, h: EdgeSetFunction, s: SeqType[int], tau: int) -> float:
    """g_tau(s): the exact worst-case residual."""
    return worst_case_removal(g, h, s, tau).residual
