"""Seeded random instance generators."""
from __future__ import annotations

import random

from .errors import BadParams
from .graph import Digraph, Graph
from .oracle import SetCoverInstance
from .treedecomp import TreeDecomposition


def random_digraph(n, p, seed=None, terminals=None, budget=None) -> Digraph:
    if n < 1 or not 0.0 <= p <= 1.0:
        raise BadParams("need n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    arcs = tuple((u, v) for u in range(1, n + 1) for v in range(1, n + 1)
                 if u != v and rng.random() < p)
    if terminals is None:
        terminals = range(1, n + 1)
    elif isinstance(terminals, int):
        terminals = sorted(rng.sample(range(1, n + 1), terminals))
    return Digraph(n, arcs, terminals, len(arcs) if budget is None else budget)


def random_graph(n, p, seed=None, budget=None) -> Graph:
    if n < 1 or not 0.0 <= p <= 1.0:
        raise BadParams("need n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = tuple((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
                  if rng.random() < p)
    return Graph(n, edges, len(edges) if budget is None else budget)


def partial_ktree(n, k, seed=None, keep=0.8, both=0.4, terminals=None, budget=None):
    """Random digraph whose underlying graph is a partial k-tree, plus a
    tree decomposition of width at most ``k`` that certifies it.

    Each k-tree edge survives with probability ``keep``; a survivor becomes
    two opposite arcs with probability ``both``, otherwise one arc of random
    direction.
    """
    if k < 1 or n < 1:
        raise BadParams("need n >= 1 and k >= 1")
    rng = random.Random(seed)
    label = list(range(1, n + 1))
    rng.shuffle(label)
    core = list(range(min(n, k + 1)))
    edges = [(a, b) for i, a in enumerate(core) for b in core[i + 1:]]
    bags = {1: frozenset(core)}
    tree = []
    cliques = []  # (k-clique, bag id holding it)
    for i in range(len(core)):
        cliques.append((tuple(c for c in core if c != core[i]), 1))
    for v in range(len(core), n):
        clique, host = rng.choice(cliques)
        bid = len(bags) + 1
        bags[bid] = frozenset(clique) | {v}
        tree.append((host, bid))
        edges.extend((c, v) for c in clique)
        for drop in clique:
            cliques.append((tuple(c for c in clique if c != drop) + (v,), bid))
    arcs = []
    for a, b in edges:
        if rng.random() >= keep:
            continue
        u, w = label[a], label[b]
        if rng.random() < both:
            arcs.extend([(u, w), (w, u)])
        elif rng.random() < 0.5:
            arcs.append((u, w))
        else:
            arcs.append((w, u))
    if terminals is None:
        terminals = range(1, n + 1)
    elif isinstance(terminals, int):
        terminals = sorted(rng.sample(range(1, n + 1), terminals))
    d = Digraph(n, tuple(arcs), terminals, len(arcs) if budget is None else budget)
    td = TreeDecomposition({b: frozenset(label[x] for x in s) for b, s in bags.items()},
                           tuple(tree))
    return d, td


def random_set_cover(n, m, seed=None, density=0.4) -> SetCoverInstance:
    if n < 1 or m < 1:
        raise BadParams("need n >= 1 and m >= 1")
    rng = random.Random(seed)
    sets = []
    for _ in range(m):
        s = {j for j in range(1, n + 1) if rng.random() < density}
        if not s:
            s = {rng.randint(1, n)}
        sets.append(frozenset(s))
    # Guarantee coverage so the instance is feasible.
    covered = set().union(*sets)
    for j in range(1, n + 1):
        if j not in covered:
            i = rng.randrange(m)
            sets[i] = sets[i] | {j}
    return SetCoverInstance(n, tuple(sets), m)


def random_strong_digraph(n, m, seed=None, terminals=None, budget=None) -> Digraph:
    """Strongly connected digraph: a random Hamiltonian cycle plus random arcs up to ``m``."""
    if n < 2 or not n <= m <= n * (n - 1):
        raise BadParams("need n >= 2 and n <= m <= n(n-1)")
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arcs = {(order[i], order[(i + 1) % n]) for i in range(n)}
    rest = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)
            if u != v and (u, v) not in arcs]
    arcs.update(rng.sample(rest, m - n))
    if terminals is None:
        terminals = range(1, n + 1)
    elif isinstance(terminals, int):
        terminals = sorted(rng.sample(range(1, n + 1), terminals))
    arcs = tuple(sorted(arcs))
    return Digraph(n, arcs, terminals, len(arcs) if budget is None else budget)


def planted_cover_digraph(n, k, seed=None, p=0.5, budget=None) -> Digraph:
    """Digraph whose underlying graph has a vertex cover ``{1..k}``: each other
    vertex gets at least one arc from and one arc to the cover."""
    if not 1 <= k < n:
        raise BadParams("need 1 <= k < n")
    rng = random.Random(seed)
    cover = list(range(1, k + 1))
    arcs = {(u, v) for u in cover for v in cover if u != v and rng.random() < p}
    for v in range(k + 1, n + 1):
        arcs.add((rng.choice(cover), v))
        arcs.add((v, rng.choice(cover)))
        for u in cover:
            if rng.random() < p / 2:
                arcs.add((u, v))
            if rng.random() < p / 2:
                arcs.add((v, u))
    arcs = tuple(sorted(arcs))
    return Digraph(n, arcs, None, len(arcs) if budget is None else budget)
