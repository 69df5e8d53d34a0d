import random

import pytest

from rosenets.datasets import figure2_graph
from rosenets.utility import make_utility

A, B, C, D, E, F, G = range(7)
TOL = 1e-9


@pytest.fixture
def fig2():
    return figure2_graph()


@pytest.fixture
def fig2_modular(fig2):
    return fig2, make_utility("modular", fig2)


@pytest.fixture
def rng():
    return random.Random(12345)


def brute_induced(g, s):
    """Definition-level induced edge set: scan every graph edge against positions."""
    pos = {v: i for i, v in enumerate(s)}
    return {
        (e.tail, e.head) for e in g.edges
        if e.tail in pos and e.head in pos and pos[e.tail] <= pos[e.head]
    }


ACCEPTANCE_LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{criterion}] {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
