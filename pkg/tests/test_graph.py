import random
from itertools import combinations

import pytest

from scss.errors import CyclicInput, RangeError
from scss.generators import random_digraph
from scss.graph import (Digraph, condensation, reachability_matrix, scc_labels,
                        strongly_connected, terminals_mutually_reachable,
                        topological_order, transitive_reduction_dag)

from conftest import directed_cycle


def _bfs_pairs(n, arcs):
    succ = {v: [] for v in range(1, n + 1)}
    for u, v in arcs:
        succ[u].append(v)
    reach = {}
    for s in range(1, n + 1):
        seen, todo = {s}, [s]
        while todo:
            x = todo.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        reach[s] = seen
    return reach


def test_digraph_rejects_self_loops_duplicates_and_range():
    with pytest.raises(RangeError):
        Digraph(2, ((1, 1),))
    with pytest.raises(RangeError):
        Digraph(2, ((1, 2), (1, 2)))
    with pytest.raises(RangeError):
        Digraph(2, ((1, 3),))
    with pytest.raises(RangeError):
        Digraph(2, ((1, 2),), terminals=(3,))


def test_default_terminals_are_all_vertices():
    d = Digraph(4, ((1, 2),))
    assert d.terminals == (1, 2, 3, 4)
    assert Digraph(4, (), (3, 1)).terminals == (1, 3)


def test_triangle_is_mutually_reachable(triangle):
    assert terminals_mutually_reachable(triangle, triangle.all_arcs(), (1, 2, 3))


def test_single_arc_is_not():
    d = Digraph(2, ((1, 2),))
    assert not terminals_mutually_reachable(d, d.all_arcs(), (1, 2))
    assert terminals_mutually_reachable(d, frozenset(), ())


def test_mutual_reachability_matches_bfs():
    rng = random.Random(11)
    for seed in range(50):
        d = random_digraph(5, 0.35, seed)
        x = frozenset(i for i in range(d.m) if rng.random() < 0.7)
        terms = sorted(rng.sample(range(1, 6), rng.randint(1, 5)))
        reach = _bfs_pairs(5, d.arcs_of(x))
        expect = all(v in reach[u] for u in terms for v in terms)
        assert terminals_mutually_reachable(d, x, terms) == expect


def test_strong_connectivity_of_cycles():
    c4 = directed_cycle(4)
    assert strongly_connected(c4)
    assert not strongly_connected(c4, frozenset(range(3)))


def test_strong_connectivity_matches_scc_count():
    for seed in range(40):
        d = random_digraph(6, 0.3, seed)
        labels = scc_labels(d.n, d.successors())
        assert strongly_connected(d) == (len(set(labels[1:])) == 1)
        assert strongly_connected(d) == terminals_mutually_reachable(d, d.all_arcs(), d.vertices)


def test_condensation_cases():
    assert condensation(directed_cycle(5)).count == 1
    dag = Digraph(4, ((1, 2), (2, 3), (1, 4)))
    assert condensation(dag).count == 4
    two = Digraph(6, ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (3, 4)))
    c = condensation(two)
    assert c.count == 2
    assert len(c.quotient_arcs) == 1
    assert c.witness[c.quotient_arcs[0]] == (3, 4)


def test_condensation_quotient_is_acyclic_and_topological():
    for seed in range(30):
        d = random_digraph(7, 0.25, seed)
        c = condensation(d)
        arcs = [(a + 1, b + 1) for a, b in c.quotient_arcs]
        assert topological_order(c.count, arcs) is not None
        assert all(a < b for a, b in c.quotient_arcs)
        reach = _bfs_pairs(d.n, d.arcs)
        for u in d.vertices:
            for v in d.vertices:
                same = c.component[u] == c.component[v]
                assert same == (v in reach[u] and u in reach[v])


def test_transitive_reduction_drops_shortcut():
    dag = Digraph(3, ((1, 2), (2, 3), (1, 3)))
    assert dag.arcs_of(transitive_reduction_dag(dag)) == [(1, 2), (2, 3)]
    assert transitive_reduction_dag(Digraph(3, ())) == frozenset()


def test_transitive_reduction_rejects_cycles():
    with pytest.raises(CyclicInput):
        transitive_reduction_dag(directed_cycle(3))


def _random_dag(n, p, seed):
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arcs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Digraph(n, tuple(arcs))


def test_transitive_reduction_is_minimum_on_random_dags():
    for seed in range(15):
        dag = _random_dag(7, 0.35, seed)
        keep = transitive_reduction_dag(dag)
        target = reachability_matrix(dag.n, dag.arcs)
        assert reachability_matrix(dag.n, dag.arcs_of(keep)) == target
        best = next(k for k in range(dag.m + 1)
                    if any(reachability_matrix(dag.n, sub) == target
                           for sub in combinations(dag.arcs, k)))
        assert len(keep) == best
