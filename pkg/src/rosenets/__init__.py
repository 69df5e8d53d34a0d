"""Robust sequence selection on networked submodular objectives."""
from .algorithms import (
    AlgorithmResult, GreedyContext, frequency, omega, rosenets, run_algorithm, sequence_greedy,
)
from .bounds import (
    BoundConstants, OracleSolution, Verdict, check_lemma1, check_lemma2, check_lemma3,
    check_ratio, optimal_robust_sequence, theorem1_ratio, theorem2_ratio,
)
from .graph import DirectedGraph, Edge, GraphError, degree_stats, induced_edge_set, remove_elements
from .metrics import MetricRow, accuracy_score, aggregate, sequence_score
from .robustness import InfeasibleError, RemovalOutcome, prefix_removal, worst_case_removal
from .utility import (
    EvalCounter, ModularSum, ProbabilisticCoverage, make_utility, residual_value, sequence_value,
)

__version__ = "0.1.0"
