"""Approximation-ratio formulas, a brute-force optimum and executable lemma checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb, perm
from typing import Iterable, Sequence as SeqType

from .algorithms import rosenets, sequence_greedy
from .graph import DirectedGraph, Sequence, degree_stats
from .robustness import InfeasibleError, worst_case_removal
from .utility import EdgeSetFunction, sequence_value

ORACLE_CAP = 10**7
TOL = 1e-9


class DomainError(ValueError):
    """Bound parameters outside the range where the formulas are defined."""


@dataclass(frozen=True)
class BoundConstants:
    k: int
    tau: int
    d_in: int
    d_out: int
    alpha: float
    beta: float
    gamma: float
    eta: float | None  # None at the pole k - tau - 1 == 0

    @classmethod
    def from_params(cls, k: int, tau: int, d_in: int, d_out: int) -> "BoundConstants":
        if k < 3:
            raise DomainError(f"bounds need k >= 3, got k={k}")
        if not 0 <= tau <= k:
            raise DomainError(f"tau={tau} outside 0..{k}")
        if d_in < 1 or d_out < 0:
            raise DomainError(f"bounds need d_in >= 1 and d_out >= 0, got ({d_in}, {d_out})")
        gamma = math.exp((k - 3) / (k - 2))
        eta = math.exp((k - 2 * tau - 1) / (k - tau - 1)) if k - tau - 1 > 0 else None
        return cls(k, tau, d_in, d_out, 2 * d_in + 1, 1 + d_in + d_out, gamma, eta)


def _greedy_factor(k: int) -> float:
    return 1.0 - math.exp(-(1.0 - 1.0 / k))


def theorem1_terms(c: BoundConstants) -> tuple[float, float]:
    if c.tau != 1:
        raise DomainError(f"the tau=1 bound was asked for tau={c.tau}")
    first = _greedy_factor(c.k) / (c.alpha * c.beta)
    g = c.gamma ** (1.0 / c.d_in)
    second = (g - 1.0) / (c.beta * g - 1.0)
    return first, second


def theorem1_ratio(c: BoundConstants) -> float:
    return max(theorem1_terms(c))


def theorem2_terms(c: BoundConstants) -> tuple[float, float | None]:
    """First and second term; the second is None at the eta pole or when its
    denominator is not positive."""
    if c.tau < 1:
        raise DomainError(f"the general bound needs tau >= 1, got {c.tau}")
    gf = _greedy_factor(c.k)
    first = gf / (c.alpha * c.beta)
    if c.eta is None:
        return first, None
    e = c.eta ** (1.0 / c.d_in)
    denom = c.tau * c.alpha * e - c.beta * gf
    if denom <= 0:
        return first, None
    return first, c.tau * c.alpha * c.beta * (e - 1.0) / denom


def theorem2_ratio(c: BoundConstants) -> float:
    first, second = theorem2_terms(c)
    return first if second is None else max(first, second)


def guaranteed_ratio(k: int, tau: int, d_in: int, d_out: int) -> float:
    """Ratio for (k, tau): the tau=1 bound when tau is 1, the general one otherwise."""
    c = BoundConstants.from_params(k, tau, d_in, d_out)
    return theorem1_ratio(c) if tau == 1 else theorem2_ratio(c)


@dataclass(frozen=True)
class OracleSolution:
    sequence: Sequence
    robust_value: float
    nonrobust_value: float


def oracle_cost(n: int, k: int, tau: int, strict: bool = False) -> int:
    lengths = range(min(k, n) + 1) if strict else (min(k, n),)
    return sum(perm(n, j) * comb(j, min(tau, j)) for j in lengths)


def optimal_robust_sequence(
    g: DirectedGraph,
    h: EdgeSetFunction,
    k: int,
    tau: int,
    exclude: Iterable[int] = (),
    strict: bool = False,
    cap: int = ORACLE_CAP,
) -> OracleSolution:
    """Exhaustive max over sequences of the worst-case residual after tau removals.

    Only sequences of length min(k, n) are scanned: inserting an element never
    lowers the worst-case residual. ``strict`` scans every length up to k.
    Ties go to the lexicographically smallest sequence.
    """
    if k < 0 or tau < 0:
        raise ValueError("k and tau must be non-negative")
    excluded = set(exclude)
    pool = [v for v in range(g.n_elements) if v not in excluded]
    cost = oracle_cost(len(pool), k, tau, strict)
    if cost > cap:
        raise InfeasibleError(f"oracle needs {cost} evaluations, cap is {cap}")
    lengths = range(min(k, len(pool)) + 1) if strict else (min(k, len(pool)),)
    best: tuple[float, Sequence] | None = None
    for length in lengths:
        for s in permutations(pool, length):
            val = worst_case_removal(g, h, s, tau).residual if tau else sequence_value(h, g, s)
            if best is None or val > best[0] + TOL:
                best = (val, s)
    assert best is not None
    return OracleSolution(best[1], best[0], sequence_value(h, g, best[1]))


@dataclass
class Verdict:
    holds: bool
    lhs: float = 0.0
    rhs: float = 0.0
    witness: dict = field(default_factory=dict)
    skipped: bool = False

    def __bool__(self) -> bool:
        return self.holds


def _d_in(g: DirectedGraph) -> int:
    # a graph without non-loop edges has d_in = 0; every lemma then holds with 1
    return max(degree_stats(g)[0], 1)


def check_ratio(
    g: DirectedGraph, h: EdgeSetFunction, k: int, tau: int, scale: float = 1.0
) -> Verdict:
    """g_tau(RoseNets output) >= ratio * g_tau(optimum).

    ``scale`` multiplies the ratio; values above 1 exist only to prove the
    harness can fail.
    """
    d_in, d_out = degree_stats(g)
    ratio = guaranteed_ratio(k, tau, max(d_in, 1), d_out) * scale
    res = rosenets(g, h, k, tau)
    got = worst_case_removal(g, h, res.sequence, tau).residual
    opt = optimal_robust_sequence(g, h, k, tau)
    return Verdict(
        got >= ratio * opt.robust_value - TOL,
        got,
        ratio * opt.robust_value,
        {
            "sequence": res.sequence,
            "optimum": opt.sequence,
            "optimum_value": opt.robust_value,
            "ratio": ratio,
            "eval_calls": res.eval_calls,
            "k": k,
            "tau": tau,
        },
    )


def check_lemma1(
    g: DirectedGraph, h: EdgeSetFunction, s1: SeqType[int], s2: SeqType[int]
) -> Verdict:
    """Some single element v outside s1 gains at least f(s2 | s1) / (d_in |s2|).

    The conditional gain uses s2 placed in front of s1; the s1-then-s2 order is
    reported in the witness as ``rhs_s1_first`` / ``holds_s1_first``.
    """
    s1, s2 = tuple(s1), tuple(s2)
    if not s2 or set(s1) & set(s2):
        raise ValueError("s2 must be non-empty and disjoint from s1")
    d = _d_in(g)
    base = sequence_value(h, g, s1)
    gains = {v: sequence_value(h, g, s1 + (v,)) - base for v in range(g.n_elements) if v not in s1}
    best_v = max(gains, key=lambda v: (gains[v], -v))
    lhs = gains[best_v]
    rhs = (sequence_value(h, g, s2 + s1) - base) / (d * len(s2))
    rhs_alt = (sequence_value(h, g, s1 + s2) - base) / (d * len(s2))
    return Verdict(
        lhs >= rhs - TOL,
        lhs,
        rhs,
        {
            "s1": s1,
            "s2": s2,
            "v": best_v,
            "d_in": d,
            "rhs_s1_first": rhs_alt,
            "holds_s1_first": lhs >= rhs_alt - TOL,
        },
    )


def lemma2_bound(opt_value: float, c: float, k_removed: int, k: int, d_in: int) -> float:
    """(e^x - 1) / (e^x - c) * opt with x = k' / (d_in k); zero when k' = 0."""
    if k_removed == 0:
        return 0.0
    ex = math.exp(k_removed / (d_in * k))
    return (ex - 1.0) / (ex - c) * opt_value


def check_lemma2(
    g: DirectedGraph, h: EdgeSetFunction, k: int, prefixes_only: bool = False
) -> Verdict:
    """Greedy value against the bound built from each of its subsequences.

    Every subsequence s' of the greedy output s gives k' = |s| - |s'| and
    c = f(s') / f(s). ``prefixes_only`` restricts s' to prefixes of s.
    """
    s = sequence_greedy(g, h, k)
    total = sequence_value(h, g, s)
    if total <= 0:
        return Verdict(True, skipped=True, witness={"reason": "greedy value is zero"})
    try:
        opt = optimal_robust_sequence(g, h, k, 0)
    except InfeasibleError as exc:
        return Verdict(True, skipped=True, witness={"reason": str(exc)})
    d = _d_in(g)
    worst: Verdict | None = None
    if prefixes_only:
        subs: Iterable[tuple[int, ...]] = (tuple(range(i)) for i in range(len(s) + 1))
    else:
        subs = (idx for r in range(len(s) + 1) for idx in combinations(range(len(s)), r))
    for idx in subs:
        sub = tuple(s[i] for i in idx)
        c = sequence_value(h, g, sub) / total
        rhs = lemma2_bound(opt.nonrobust_value, c, len(s) - len(sub), k, d)
        v = Verdict(
            total >= rhs - TOL,
            total,
            rhs,
            {"sequence": s, "subsequence": sub, "c": c, "optimum": opt.sequence,
             "optimum_value": opt.nonrobust_value, "d_in": d},
        )
        if worst is None or (v.lhs - v.rhs) < (worst.lhs - worst.rhs):
            worst = v
    assert worst is not None
    return worst


def check_lemma3(
    g: DirectedGraph, h: EdgeSetFunction, k: int, tau: int, z: Iterable[int]
) -> Verdict:
    """g_tau of the robust optimum never exceeds the non-robust optimum on V - Z
    with budget k - tau."""
    z = frozenset(z)
    if len(z) > tau:
        raise ValueError(f"|Z|={len(z)} exceeds tau={tau}")
    try:
        left = optimal_robust_sequence(g, h, k, tau)
        right = optimal_robust_sequence(g, h, max(k - tau, 0), 0, exclude=z)
    except InfeasibleError as exc:
        return Verdict(True, skipped=True, witness={"reason": str(exc)})
    return Verdict(
        left.robust_value <= right.nonrobust_value + TOL,
        left.robust_value,
        right.nonrobust_value,
        {"z": tuple(sorted(z)), "robust_optimum": left.sequence, "reduced_optimum": right.sequence},
    )
