import numpy as np
import pytest

from realized_cumulants.models import TreeModel


def random_tree(rng, depth=3, max_branch=3, multi_root=False):
    """Non-recombining tree with random branching, probabilities and payoffs."""
    transitions = []
    width = 2 if multi_root else 1
    for _ in range(depth):
        level, child = [], 0
        for _ in range(width):
            k = int(rng.integers(1, max_branch + 1))
            p = rng.dirichlet(np.ones(k)) * 0.9 + 0.1 / k
            p[-1] = 1.0 - p[:-1].sum()
            level.append([(child + i, float(p[i])) for i in range(k)])
            child += k
        transitions.append(level)
        width = child
    initial = None
    if multi_root:
        initial = [0.3, 0.7]
    return TreeModel(transitions, rng.normal(size=width), initial)


@pytest.fixture
def binomial2():
    return TreeModel.binomial_walk(2)


@pytest.fixture
def binomial3():
    return TreeModel.binomial_walk(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
