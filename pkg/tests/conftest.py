import networkx as nx
import pytest

from k3hiso.graph import ColoredGraph


def from_nx(g):
    g = nx.convert_node_labels_to_integers(g)
    return ColoredGraph(g.number_of_nodes(), g.edges())


def path(n):
    return ColoredGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return ColoredGraph(n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture
def rng():
    import random
    return random.Random(12345)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
