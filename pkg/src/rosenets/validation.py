"""Randomised campaigns over small instances: ratio sandwich, lemmas, submodularity.

Every campaign draws its instances from ``random.Random(seed)`` so a seed
fixes the whole stream.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .bounds import Verdict, check_lemma1, check_lemma2, check_lemma3, check_ratio
from .datasets import random_graph
from .graph import DirectedGraph
from .robustness import InfeasibleError
from .utility import EdgeSetFunction, make_utility

TOL = 1e-9


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    skipped: int = 0
    violations: list[Verdict] = field(default_factory=list)
    max_eval_ratio: float = 0.0  # eval_calls / (k |E|), worst seen

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, v: Verdict) -> None:
        if v.skipped:
            self.skipped += 1
            return
        self.checked += 1
        if not v.holds:
            self.violations.append(v)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return (f"{status} {self.name}: checked={self.checked} skipped={self.skipped} "
                f"violations={len(self.violations)}")


def random_instance(
    rng: random.Random, max_n: int, max_edges: int = 10, min_n: int = 3
) -> tuple[DirectedGraph, EdgeSetFunction]:
    """Random DAG, self-loops on about half the instances, either utility kind."""
    n = rng.randint(min_n, max_n)
    m = rng.randint(1, min(max_edges, n * (n - 1) // 2))
    loops = rng.choice((0.0, 0.5))
    g = random_graph(rng, n, m, acyclic=True, self_loop_prob=loops)
    return g, make_utility(rng.choice(("coverage", "modular")), g)


def ratio_suite(
    seed: int = 0,
    n_instances: int = 200,
    max_n: int = 6,
    k_range: tuple[int, int] = (3, 5),
    tau_range: tuple[int, int] = (1, 2),
    scale: float = 1.0,
) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("ratio-sandwich")
    for _ in range(n_instances):
        g, h = random_instance(rng, max_n)
        k = rng.randint(*k_range)
        tau = rng.randint(tau_range[0], min(tau_range[1], k))
        try:
            v = check_ratio(g, h, k, tau, scale)
        except InfeasibleError as exc:
            rep.add(Verdict(True, skipped=True, witness={"reason": str(exc)}))
            continue
        v.witness["edges"] = [(e.tail, e.head, e.weight) for e in g.edges]
        v.witness["utility"] = h.kind
        if g.n_edges:
            rep.max_eval_ratio = max(rep.max_eval_ratio, v.witness["eval_calls"] / (k * g.n_edges))
        rep.add(v)
    return rep


def lemma1_suite(seed: int = 0, draws: int = 1000, max_n: int = 7) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("lemma1")
    for _ in range(draws):
        g, h = random_instance(rng, max_n, max_edges=12)
        elems = list(range(g.n_elements))
        rng.shuffle(elems)
        a = rng.randint(0, len(elems) - 1)
        b = rng.randint(1, len(elems) - a)
        v = check_lemma1(g, h, elems[:a], elems[a:a + b])
        v.witness["edges"] = [(e.tail, e.head, e.weight) for e in g.edges]
        rep.add(v)
    return rep


def lemma2_suite(
    seed: int = 0, n_instances: int = 50, max_n: int = 6, k_range: tuple[int, int] = (2, 5)
) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("lemma2")
    for _ in range(n_instances):
        g, h = random_instance(rng, max_n)
        v = check_lemma2(g, h, rng.randint(*k_range))
        v.witness["edges"] = [(e.tail, e.head, e.weight) for e in g.edges]
        rep.add(v)
    return rep


def lemma3_suite(
    seed: int = 0,
    n_instances: int = 50,
    max_n: int = 6,
    k_range: tuple[int, int] = (3, 5),
    tau_max: int = 2,
) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("lemma3")
    for _ in range(n_instances):
        g, h = random_instance(rng, max_n)
        k = rng.randint(*k_range)
        tau = rng.randint(1, min(tau_max, k))
        for r in range(tau + 1):
            for z in combinations(range(g.n_elements), r):
                rep.add(check_lemma3(g, h, k, tau, z))
    return rep


def _subset_values(h: EdgeSetFunction, keys: list) -> list[float]:
    return [
        h.evaluate(frozenset(keys[i] for i in range(len(keys)) if mask >> i & 1))
        for mask in range(1 << len(keys))
    ]


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def audit_submodularity(h: EdgeSetFunction) -> Verdict:
    """Exhaustive check over every A subset of B subset of E and e outside B."""
    keys = [e.key for e in h.graph.edges]
    m = len(keys)
    val = _subset_values(h, keys)
    for b in range(1 << m):
        outside = [i for i in range(m) if not b >> i & 1]
        for a in _submasks(b):
            if val[a] > val[b] + TOL:
                return Verdict(False, val[a], val[b], {"kind": "monotone", "A": a, "B": b})
            for i in outside:
                bit = 1 << i
                gain_a = val[a | bit] - val[a]
                gain_b = val[b | bit] - val[b]
                if gain_a < gain_b - TOL:
                    return Verdict(False, gain_a, gain_b,
                                   {"kind": "submodular", "A": a, "B": b, "e": keys[i]})
    return Verdict(True)


def submodularity_suite(
    seed: int = 0, n_instances: int = 100, max_n: int = 8, max_edges: int = 10,
    kind: str = "coverage",
) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport(f"submodularity-{kind}")
    for _ in range(n_instances):
        n = rng.randint(2, max_n)
        m = rng.randint(1, max_edges)
        g = random_graph(rng, n, m, acyclic=rng.random() < 0.5, self_loop_prob=0.3)
        if g.n_edges > max_edges:
            g = DirectedGraph(n, g.edges[:max_edges])
        rep.add(audit_submodularity(make_utility(kind, g)))
    return rep
