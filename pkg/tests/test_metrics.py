import random
from itertools import combinations

import pytest

from rosenets.metrics import MetricRow, accuracy_score, aggregate, sequence_score


def brute_pairs(pred, truth):
    count = 0
    for i, j in combinations(range(len(pred)), 2):
        a, b = pred[i], pred[j]
        if a in truth and b in truth and truth.index(a) < truth.index(b):
            count += 1
    return count


def test_examples():
    assert sequence_score([1, 2, 3], [1, 2, 3]) == 3
    assert sequence_score([3, 2, 1], [1, 2, 3]) == 0
    assert sequence_score([1, 9, 3], [3, 1]) == 0
    assert sequence_score([1, 9, 3], [1, 3]) == 1
    assert sequence_score([], [1, 2]) == 0
    assert accuracy_score([1, 2, 9], [2, 1, 5]) == 2
    assert accuracy_score([], [1]) == 0


def test_against_brute_force():
    rng = random.Random(7)
    for _ in range(1000):
        pool = list(range(15))
        pred = rng.sample(pool, rng.randint(0, 12))
        truth = rng.sample(pool, rng.randint(0, 12))
        assert sequence_score(pred, truth) == brute_pairs(pred, truth)
        assert accuracy_score(pred, truth) == len(set(pred) & set(truth))


def test_aggregate():
    row = aggregate([(1, 2, 0.5), MetricRow(3, 0, 1.5)])
    assert (row.accuracy, row.sequence_score, row.utility, row.n_tasks) == (2, 1, 1.0, 2)
    with pytest.raises(ValueError):
        aggregate([])
