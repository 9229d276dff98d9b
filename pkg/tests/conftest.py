import pytest

from hallmedian import SetSystem, Tree

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def triples(text):
    return SetSystem.from_sets([line.split() for line in text.strip().splitlines()])


@pytest.fixture
def e1():
    return triples("1 2 3\n1 3 4\n3 4 5")


@pytest.fixture
def e4():
    return triples("1 2 3\n1 2 4\n1 3 4\n4 5 6")


@pytest.fixture
def e1_caterpillar():
    """u1(1,2) - u2(3) - u3(4,5) with spine ids 0, 1, 2 and leaf ids 11..15."""
    edges = [(0, 1), (1, 2), (0, 11), (0, 12), (1, 13), (2, 14), (2, 15)]
    return Tree.from_edges(edges, {10 + i: str(i) for i in range(1, 6)})


@pytest.fixture
def quartet():
    """((1,2),(3,4)) with interior 0 (next to 1, 2) and 1 (next to 3, 4)."""
    edges = [(0, 1), (0, 11), (0, 12), (1, 13), (1, 14)]
    return Tree.from_edges(edges, {10 + i: str(i) for i in range(1, 5)})
