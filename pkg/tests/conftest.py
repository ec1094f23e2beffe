import pytest

from scss.graph import Digraph


@pytest.fixture
def triangle():
    return Digraph(3, ((1, 2), (2, 3), (3, 1)), None, 3)


def bidirected_star(leaves, budget=0):
    arcs = []
    for v in range(2, leaves + 2):
        arcs += [(1, v), (v, 1)]
    return Digraph(leaves + 1, tuple(arcs), None, budget)


def directed_cycle(n, budget=0):
    return Digraph(n, tuple((v, v % n + 1) for v in range(1, n + 1)), None, budget)
