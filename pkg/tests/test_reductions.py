import math
import random

import pytest

from scss.generators import random_digraph, random_graph, random_set_cover
from scss.graph import (Digraph, Graph, is_two_edge_connected, reachability_matrix,
                        transitive_reduction_dag)
from scss.oracle import (SetCoverInstance, brute_2ecss, brute_meg, brute_scss,
                         brute_set_cover)
from scss.reductions import (ecss_to_scsps, exact_engine, setcover_layout,
                             setcover_to_scss, solve_2ecss, solve_meg)

from conftest import directed_cycle

K4 = Graph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))


def _cycle(n):
    return Graph(n, tuple((v, v % n + 1) for v in range(1, n + 1)), n)


def test_bidirection_doubles_edges():
    d = ecss_to_scsps(_cycle(4))
    assert d.m == 8 and d.terminals == (1, 2, 3, 4) and d.budget == 4


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cycles(n):
    opt, edges = solve_2ecss(_cycle(n))
    assert opt == n and len(edges) == n


def test_k4():
    opt, edges = solve_2ecss(K4)
    assert opt == 4 == brute_2ecss(K4)
    assert is_two_edge_connected(Graph(4, tuple(edges)))


def test_bridge_short_circuits():
    g = Graph(4, ((1, 2), (2, 3), (3, 1), (3, 4)), 10)
    assert solve_2ecss(g) == (math.inf, None)
    d = ecss_to_scsps(g)
    assert brute_scss(d) == 5


def test_random_2ecss_against_brute_force():
    for seed in range(40):
        g = random_graph(6, 0.6, seed)
        opt, edges = solve_2ecss(g)
        assert opt == brute_2ecss(g)
        if edges is not None:
            assert len(edges) == opt
            assert set(edges) <= set(g.edges)
            assert is_two_edge_connected(Graph(g.n, tuple(edges)))


def test_meg_on_dag_is_transitive_reduction():
    dag = Digraph(4, ((1, 2), (2, 3), (1, 3), (3, 4), (1, 4)))
    total, arcs = solve_meg(dag)
    assert arcs == transitive_reduction_dag(dag)
    assert total == 3


def test_meg_on_strong_input_is_spanning_optimum():
    d = Digraph(4, ((1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (3, 1)))
    total, arcs = solve_meg(d)
    assert total == exact_engine(d)[0] == 4


def test_meg_preserves_reachability_and_is_minimum():
    for seed in range(40):
        d = random_digraph(6, 0.3, seed)
        total, arcs = solve_meg(d)
        assert total == len(arcs) == brute_meg(d)[0]
        assert reachability_matrix(d.n, d.arcs_of(arcs)) == reachability_matrix(d.n, d.arcs)


def test_meg_witness_is_smallest_arc():
    d = Digraph(4, ((1, 2), (2, 1), (3, 4), (4, 3), (2, 3), (1, 4), (1, 3)))
    _, arcs = solve_meg(d)
    between = [a for a in d.arcs_of(arcs) if (a[0] <= 2) != (a[1] <= 2)]
    assert between == [(1, 3)]


def test_single_element_gadget():
    sc = SetCoverInstance(1, ({1},), 1)
    d = setcover_to_scss(sc)
    assert d.n == 4 and d.m == 4
    assert brute_scss(d) == 4 == sc.k + 2 * sc.n + 1
    assert d.budget == 4


def test_gadget_structure():
    for seed in range(20):
        sc = random_set_cover(4, 3, seed)
        d = setcover_to_scss(sc)
        lay = setcover_layout(sc)
        assert d.n == sc.m + sc.n + 2
        vf = set(lay["v"].values())
        succ = d.successors()
        for j, u in lay["u"].items():
            mids = [v for v in succ[lay["s"]] if u in succ[v]]
            assert mids and set(mids) <= vf
            assert not d.has_arc(lay["s"], u)
        cover = {lay["s"]} | set(lay["u"].values())
        assert len(cover) == sc.n + 1
        assert all(a in cover or b in cover for a, b in d.underlying_edges())


def test_gadget_optimum_relation():
    rng = random.Random(6)
    for seed in range(30):
        sc = random_set_cover(rng.randint(1, 4), rng.randint(1, 4), seed)
        d = setcover_to_scss(sc)
        assert brute_scss(d) == brute_set_cover(sc) + 2 * sc.n + 1
