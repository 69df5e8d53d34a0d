"""Recommendation metrics: accuracy, ordered-pair agreement, averaging."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence as SeqType


@dataclass(frozen=True)
class MetricRow:
    accuracy: float
    sequence_score: float
    utility: float
    n_tasks: int = 1


def accuracy_score(pred: SeqType[int], truth: SeqType[int]) -> int:
    """Number of predicted items that occur anywhere in the truth."""
    return len(set(pred) & set(truth))


def sequence_score(pred: SeqType[int], truth: SeqType[int]) -> int:
    """Pairs (a, b) ordered a-before-b in both sequences."""
    where = {v: i for i, v in enumerate(truth)}
    common = [where[v] for v in pred if v in where]
    return sum(
        1 for i in range(len(common)) for j in range(i + 1, len(common)) if common[i] < common[j]
    )


def aggregate(rows: Iterable[MetricRow | tuple[float, float, float]]) -> MetricRow:
    rows = [r if isinstance(r, MetricRow) else MetricRow(*r) for r in rows]
    if not rows:
        raise ValueError("cannot average an empty list of metric rows")
    n = len(rows)
    return MetricRow(
        sum(r.accuracy for r in rows) / n,
        sum(r.sequence_score for r in rows) / n,
        sum(r.utility for r in rows) / n,
        n,
    )
