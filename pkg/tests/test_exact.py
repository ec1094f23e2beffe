import math
import random

import numpy as np
import pytest

from scss.algebra import INF
from scss.errors import TooManyVertices
from scss.exact import (build_path_tables, ear_step, ear_step_reference, ear_tables,
                        initial_cycles, solve_exact, value_bound)
from scss.generators import partial_ktree, random_digraph
from scss.graph import Digraph, strongly_connected, terminals_mutually_reachable
from scss.oracle import brute_ear_tables, brute_path_table, brute_scss

from conftest import bidirected_star, directed_cycle

TRIANGLE = Digraph(3, ((1, 2), (2, 3), (3, 1)))


def test_single_arc_ears():
    for seed in range(10):
        d = random_digraph(5, 0.4, seed)
        F = build_path_tables(d)
        for s in d.vertices:
            for t in d.vertices:
                if s != t:
                    assert (F.table(s, t)[0] == 1) == d.has_arc(s, t)


def test_triangle_cycle_entry():
    F = build_path_tables(TRIANGLE)
    assert F.table(1, 1)[0b110] == 3
    assert F.table(1, 1)[0b010] == INF


def test_path_tables_match_enumeration():
    for seed in range(25):
        d = random_digraph(6, 0.35, seed)
        F = build_path_tables(d)
        for s in d.vertices:
            for t in d.vertices:
                expect = brute_path_table(d, s, t)
                table = F.table(s, t)
                finite = {int(x): int(table[x]) for x in np.flatnonzero(table < INF)}
                assert finite == expect
                for inner in list(expect)[:3]:
                    seq = F.path(s, t, inner)
                    assert seq[0] == s and seq[-1] == t
                    assert all(d.has_arc(u, v) for u, v in zip(seq, seq[1:]))


def test_vertex_cap():
    with pytest.raises(TooManyVertices):
        build_path_tables(directed_cycle(5), cap=4)
    with pytest.raises(TooManyVertices):
        solve_exact(directed_cycle(17))


def test_infinite_tables_propagate():
    F = build_path_tables(bidirected_star(3))
    inf = np.full(1 << F.n, INF, dtype=np.int64)
    assert (ear_step(inf, F) == INF).all()


def test_star_two_ears():
    d = bidirected_star(2)
    tables = ear_tables(d)
    assert tables[1][0b111] == 4
    assert tables[0][0b111] == INF
    assert tables[0][0b011] == 2


def test_ear_tables_match_enumeration():
    rng = random.Random(4)
    for seed in range(20):
        n = rng.randint(3, 6)
        d = random_digraph(n, 0.45, seed)
        tables = ear_tables(d)
        brute = brute_ear_tables(d)
        for q, T in enumerate(tables, start=1):
            for X in range(1 << n):
                expect = brute.get((q, X), math.inf)
                if expect > value_bound(n):
                    expect = math.inf  # the engine drops values past the bound
                got = math.inf if T[X] >= INF else int(T[X])
                assert got == expect


def test_fused_step_matches_reference():
    for seed in range(15):
        d = random_digraph(6, 0.4, seed)
        F = build_path_tables(d)
        prev = np.where(initial_cycles(F) <= value_bound(6), initial_cycles(F), INF)
        for _ in range(3):
            fused = ear_step(prev, F)
            assert np.array_equal(fused, ear_step_reference(prev, F))
            prev = fused


def test_trivial_terminal_sets():
    d = Digraph(4, ((1, 2),), (3,), 0)
    r = solve_exact(d)
    assert r.optimum == 0 and r.solution == frozenset()


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_directed_cycle(n):
    r = solve_exact(directed_cycle(n))
    assert r.optimum == n
    assert len(r.solution) == n


@pytest.mark.parametrize("leaves", [1, 2, 3, 5])
def test_bidirected_star(leaves):
    d = bidirected_star(leaves)
    r = solve_exact(d)
    assert r.optimum == 2 * leaves == brute_scss(d)
    assert strongly_connected(d, r.solution)


def test_triangle_reconstruction():
    r = solve_exact(TRIANGLE)
    assert r.solution == frozenset(range(3))


def test_infeasible_instance():
    d = Digraph(3, ((1, 2), (2, 3)), (1, 3), 5)
    r = solve_exact(d)
    assert r.optimum == math.inf and r.solution is None


# Optima computed once with the brute-force oracle and frozen here.
FROZEN = [
    (lambda: random_digraph(7, 0.3, 1, terminals=4), 5),
    (lambda: random_digraph(7, 0.3, 7, terminals=4), 6),
    (lambda: random_digraph(7, 0.3, 0, terminals=4), math.inf),
    (lambda: partial_ktree(7, 2, seed=1, both=0.8, keep=0.9, terminals=4)[0], 6),
    (lambda: partial_ktree(7, 2, seed=4, both=0.8, keep=0.9, terminals=4)[0], 7),
]


@pytest.mark.parametrize("make,expect", FROZEN)
def test_frozen_optima(make, expect):
    assert solve_exact(make()).optimum == expect


def test_random_reconstructions_verify():
    rng = random.Random(9)
    for seed in range(60):
        n = rng.randint(2, 8)
        d = random_digraph(n, rng.uniform(0.2, 0.6), seed, terminals=rng.randint(1, n))
        r = solve_exact(d)
        if d.m <= 16:
            assert r.optimum == brute_scss(d)
        if r.solution is not None:
            assert len(r.solution) == r.optimum
            assert terminals_mutually_reachable(d, r.solution, d.terminals)


def test_value_bounds_on_vertex_sets():
    for seed in range(20):
        d = random_digraph(6, 0.4, seed)
        tables = ear_tables(d)
        best = np.minimum.reduce(tables)
        for X in np.flatnonzero(best < INF).tolist():
            size = bin(X).count("1")
            assert size <= best[X] <= 2 * (size - 1)
