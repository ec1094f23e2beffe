"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; each test prints its verdict
line directly to the terminal and also asserts it.
"""
import math
import random
import time

import numpy as np
import pytest

from scss.algebra import (INF, minplus_subset_convolution, naive_minplus_subset_convolution,
                          naive_subset_convolution_gf2, subset_convolution_gf2)
from scss.bench import join_scaling
from scss.cutcount import (ParityTable, all_codes, decide, join_tables, naive_join, pack,
                           run_dp, sample_weights, weight_parities)
from scss.exact import solve_exact
from scss.generators import (partial_ktree, planted_cover_digraph, random_digraph,
                             random_graph, random_set_cover, random_strong_digraph)
from scss.graph import (Digraph, Graph, is_two_edge_connected, reachability_matrix,
                        strongly_connected, terminals_mutually_reachable,
                        transitive_reduction_dag)
from scss.kernel import kernelize, lift_solution
from scss.oracle import (brute_2ecss, brute_meg, brute_scss, brute_set_cover,
                         closed_form_cut_pairs, count_consistent_cut_pairs,
                         enumerate_relaxed_pairs, relaxed_pair_counts, relaxed_pairs)
from scss.reductions import setcover_to_scss, solve_2ecss, solve_meg
from scss.treedecomp import heuristic_td, make_nice

# Pinned thresholds.
CUTCOUNT_INSTANCES = 200
CUTCOUNT_TRIALS = 30
CUTCOUNT_MAX_BUDGET = 8
CUTCOUNT_MAX_SECONDS = 30 * 60
PARITY_GRAPHS = 50
CUT_PAIRS = 50
JOIN_PAIRS = 100
CONVOLUTIONS = 100
EXACT_SUITE = 200
EXACT_LARGE_N, EXACT_LARGE_M, EXACT_LARGE_SECONDS = 13, 40, 600
KERNEL_INSTANCES = 100
SETCOVER_INSTANCES = 50
SCALING_LOW, SCALING_HIGH = 2.0, 4.2


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return emit


def test_criterion_1_cutcount_matches_brute_force(report):
    rng = random.Random(2024)
    start = time.perf_counter()
    seen = yes = wrong = 0
    seed = 0
    while seen < CUTCOUNT_INSTANCES:
        seed += 1
        k = rng.randint(1, 3)
        n = rng.randint(k + 1, 7)
        d, td = partial_ktree(n, k, seed=seed, keep=0.9, both=0.6, terminals=rng.randint(2, n))
        if d.m > 22:
            continue
        opt = brute_scss(d)
        if opt == math.inf:
            t = rng.randint(1, CUTCOUNT_MAX_BUDGET)
        else:
            t = max(1, min(CUTCOUNT_MAX_BUDGET, int(opt) + rng.choice((-1, 0))))
        d = d.with_budget(t)
        got = decide(d, make_nice(td, d), trials=CUTCOUNT_TRIALS, seed=seed).verdict
        expect = "yes" if opt <= t else "no"
        seen += 1
        yes += expect == "yes"
        wrong += got != expect
    took = time.perf_counter() - start
    report(1, wrong == 0 and took < CUTCOUNT_MAX_SECONDS,
           f"{seen} instances ({yes} yes), {wrong} disagreements, {took:.0f} s")


def test_criterion_2_root_parity_matches_enumeration(report):
    rng = random.Random(7)
    mismatches = weights_checked = 0
    for i in range(PARITY_GRAPHS):
        n = rng.randint(2, 5)
        d = random_digraph(n, rng.uniform(0.3, 0.6), 100 + i,
                           terminals=rng.randint(1, n), budget=rng.randint(1, 2 * n))
        w = sample_weights(d, None, i)
        r = d.terminals[0]
        root = run_dp(make_nice(heuristic_td(d), d), d, w)
        occurring = {W for _, W in relaxed_pair_counts(d, r, w)}
        folded = weight_parities(root)
        for W in range(0, 2 * d.budget * w.N + 1):
            # Weights no pair reaches have empty candidate sets.
            c = enumerate_relaxed_pairs(d, r, w, W)[2] if W in occurring else 0
            weights_checked += 1
            mismatches += (folded >> W) & 1 != c % 2
    report(2, mismatches == 0,
           f"{PARITY_GRAPHS} graphs, {weights_checked} weights, {mismatches} mismatches")


def test_criterion_3_cut_pair_closed_form(report):
    pairs = bad = 0
    for seed in range(40):
        d = random_digraph(4 + seed % 2, 0.5, 300 + seed)
        for p in relaxed_pairs(d, d.terminals[0]):
            pairs += 1
            bad += count_consistent_cut_pairs(p, d.terminals[0]) != closed_form_cut_pairs(p)
    report(3, pairs >= CUT_PAIRS and bad == 0, f"{pairs} relaxed pairs, {bad} mismatches")


def _random_table(rng, bag, t, N):
    # Entries with i arcs weigh at most 2N*i, as in any table the DP builds.
    stride = 2 * t * N + 1
    entries = {}
    for _ in range(rng.randint(1, 60)):
        key = pack([rng.choice(all_codes()) for _ in bag])
        i = rng.randint(0, t)
        entries[key] = entries.get(key, 0) ^ (1 << (i * stride + rng.randint(0, 2 * N * i)))
    return ParityTable(bag, t, stride, {k: v for k, v in entries.items() if v})


def test_criterion_4_join_matches_naive(report):
    rng = random.Random(44)
    bad = 0
    for k in range(JOIN_PAIRS):
        q = rng.randint(0, 3)
        bag = tuple(sorted(rng.sample(range(1, 8), q)))
        left = _random_table(rng, bag, 3, 2)
        right = _random_table(rng, bag, 3, 2)
        ref = naive_join(left, right).entries
        method = ("convolution", "pairwise", "auto")[k % 3]
        bad += join_tables(left, right, method).entries != ref
    report(4, bad == 0, f"{JOIN_PAIRS} table pairs on bags of size <= 3, {bad} mismatches")


def test_criterion_5_convolutions_match_naive(report):
    rng = np.random.default_rng(55)
    gf2_bad = minplus_bad = 0
    for _ in range(CONVOLUTIONS):
        u = int(rng.integers(0, 11))
        f = rng.integers(0, 2, size=1 << u, dtype=np.uint8)
        g = rng.integers(0, 2, size=1 << u, dtype=np.uint8)
        gf2_bad += not np.array_equal(subset_convolution_gf2(f, g), naive_subset_convolution_gf2(f, g))
    for _ in range(CONVOLUTIONS):
        u = int(rng.integers(0, 11))
        f = rng.integers(0, 21, size=1 << u).astype(np.int64)
        g = rng.integers(0, 21, size=1 << u).astype(np.int64)
        f[rng.random(1 << u) < 0.3] = INF
        g[rng.random(1 << u) < 0.3] = INF
        minplus_bad += not np.array_equal(minplus_subset_convolution(f, g, 20),
                                          naive_minplus_subset_convolution(f, g))
    report(5, gf2_bad == 0 and minplus_bad == 0,
           f"GF(2) {CONVOLUTIONS} inputs {gf2_bad} mismatches, "
           f"(min,+) {CONVOLUTIONS} inputs {minplus_bad} mismatches")


def test_criterion_6_exact_engine(report):
    rng = random.Random(66)
    seen = bad = unverified = 0
    seed = 0
    while seen < EXACT_SUITE:
        seed += 1
        n = rng.randint(2, 8)
        d = random_digraph(n, rng.uniform(0.15, 0.5), 600 + seed, terminals=rng.randint(1, n))
        if d.m > 16:
            continue
        seen += 1
        r = solve_exact(d)
        bad += r.optimum != brute_scss(d)
        if r.solution is not None:
            unverified += not (len(r.solution) == r.optimum
                               and terminals_mutually_reachable(d, r.solution, d.terminals))
    big = random_strong_digraph(EXACT_LARGE_N, EXACT_LARGE_M, seed=13)
    start = time.perf_counter()
    r = solve_exact(big)
    took = time.perf_counter() - start
    big_ok = r.solution is not None and len(r.solution) == r.optimum and strongly_connected(big, r.solution)
    report(6, bad == 0 and unverified == 0 and big_ok and took < EXACT_LARGE_SECONDS,
           f"{seen} small instances, {bad} disagreements, {unverified} unverified; "
           f"n={big.n} |A|={big.m} optimum {r.optimum} in {took:.1f} s")


def _kernel_instances(rng):
    seed = 0
    while True:
        seed += 1
        n = rng.randint(4, 10)
        if seed % 3:
            d = planted_cover_digraph(n, rng.randint(1, 2), seed=700 + seed, p=0.3)
        else:
            d = random_strong_digraph(n, rng.randint(n, min(22, n * (n - 1))), seed=700 + seed)
        if d.m <= 22 and strongly_connected(d):
            yield d


def test_criterion_7_kernel(report):
    rng = random.Random(77)
    seen = bad_verdict = bad_size = bad_lift = triggered = 0
    for d in _kernel_instances(rng):
        if seen >= KERNEL_INSTANCES:
            break
        seen += 1
        opt = brute_scss(d)
        d = d.with_budget(max(0, int(opt) + rng.choice((-1, 0, 0, 1))))
        reduced, trace = kernelize(d)
        k = len(trace.cover)
        triggered += bool(trace.removed)
        if not trace.canonical_no and reduced.n > k + k * k:
            bad_size += 1
        red = solve_exact(reduced)
        bad_verdict += (brute_scss(reduced) <= reduced.budget) != (opt <= d.budget)
        if red.optimum <= reduced.budget and not trace.canonical_no:
            lifted = lift_solution(d, red.solution, trace, reduced)
            bad_lift += not (strongly_connected(d, lifted) and len(lifted) <= d.budget)
    report(7, bad_verdict == 0 and bad_size == 0 and bad_lift == 0,
           f"{seen} instances ({triggered} reduced), verdict {bad_verdict}, "
           f"size {bad_size}, lift {bad_lift} failures")


def test_criterion_8_reductions(report):
    rng = random.Random(88)
    failures = []
    for n in range(3, 8):
        cycle = Graph(n, tuple((v, v % n + 1) for v in range(1, n + 1)))
        if solve_2ecss(cycle)[0] != n:
            failures.append(f"C_{n}")
    k4 = Graph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
    if solve_2ecss(k4)[0] != 4:
        failures.append("K_4")
    ecss = 0
    for seed in range(60):
        g = random_graph(rng.randint(3, 7), rng.uniform(0.4, 0.7), 800 + seed)
        if len(g.edges) > 20:
            continue
        ecss += 1
        opt, edges = solve_2ecss(g)
        if opt != brute_2ecss(g) or (edges is not None and not is_two_edge_connected(Graph(g.n, tuple(edges)))):
            failures.append(f"2ecss seed {seed}")
    meg = 0
    for seed in range(60):
        d = random_digraph(rng.randint(2, 7), rng.uniform(0.15, 0.4), 850 + seed)
        if d.m > 22:
            continue
        meg += 1
        total, arcs = solve_meg(d)
        if total != brute_meg(d)[0] or reachability_matrix(d.n, d.arcs_of(arcs)) != reachability_matrix(d.n, d.arcs):
            failures.append(f"meg seed {seed}")
    for seed in range(20):
        order = list(range(1, 8))
        random.Random(seed).shuffle(order)
        arcs = tuple((order[i], order[j]) for i in range(7) for j in range(i + 1, 7)
                     if random.Random(seed * 100 + i * 7 + j).random() < 0.4)
        dag = Digraph(7, arcs)
        if solve_meg(dag)[1] != transitive_reduction_dag(dag):
            failures.append(f"dag seed {seed}")
    for seed in range(SETCOVER_INSTANCES):
        sc = random_set_cover(rng.randint(1, 4), rng.randint(1, 4), 900 + seed)
        if brute_scss(setcover_to_scss(sc)) != brute_set_cover(sc) + 2 * sc.n + 1:
            failures.append(f"setcover seed {seed}")
    report(8, not failures,
           f"2ecss {ecss} random + cycles + K_4, meg {meg} random + 20 DAGs, "
           f"set cover {SETCOVER_INSTANCES}; failures: {failures or 'none'}")


def test_criterion_9_join_scaling(report):
    r = join_scaling((2, 3, 4, 5), seed=0)
    times = ", ".join(f"w{w} {s * 1e3:.1f} ms" for w, s in zip(r.widths, r.seconds))
    ratios = ", ".join(f"{x:.2f}" for x in r.log_ratios)
    ok = all(SCALING_LOW <= x <= SCALING_HIGH for x in r.log_ratios)
    report(9, ok, f"{times}; ln ratios {ratios} (window [{SCALING_LOW}, {SCALING_HIGH}], ln 17 = {math.log(17):.2f})")
