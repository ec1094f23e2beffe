"""Reductions between 2-ECSS, MEG, Set Cover and the strongly connected
subgraph problems."""
from __future__ import annotations

import math
from typing import Callable

from .exact import solve_exact
from .graph import (ArcSet, Digraph, Graph, bridges, condensation,
                    is_two_edge_connected, transitive_reduction_dag)
from .oracle import SetCoverInstance

Engine = Callable[[Digraph], tuple]


def exact_engine(d: Digraph) -> tuple:
    """``(optimum, ArcSet or None)`` from the subset-DP engine."""
    r = solve_exact(d)
    return r.optimum, r.solution


# -- 2-ECSS ------------------------------------------------------------------

def ecss_to_scsps(g: Graph) -> Digraph:
    """Bidirect every edge; the budget carries over unchanged."""
    arcs = []
    for u, v in g.edges:
        arcs += [(u, v), (v, u)]
    return Digraph(g.n, tuple(arcs), None, g.budget)


def _undo_double_bridges(g: Graph, pairs: set) -> set:
    # While some edge is used in both directions and is a bridge of the
    # underlying solution, swap one direction for another crossing edge of g.
    while True:
        edges = sorted({(min(u, v), max(u, v)) for u, v in pairs})
        found = None
        for u, v in sorted(bridges(g.n, edges)):
            if (u, v) in pairs and (v, u) in pairs:
                found = (u, v)
                break
        if found is None:
            return pairs
        u, v = found
        rest = [e for e in edges if e != found]
        side = _component(g.n, rest, u)
        for a, b in g.edges:
            if (a, b) != found and (a in side) != (b in side):
                inside, outside = (a, b) if a in side else (b, a)
                pairs.discard((v, u))
                pairs.add((outside, inside))
                break
        else:
            return pairs


def _component(n: int, edges: list, start: int) -> set:
    adj = {x: [] for x in range(1, n + 1)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def solve_2ecss(g: Graph, engine: Engine = exact_engine) -> tuple:
    """``(optimum, edge list)``; ``(inf, None)`` when ``g`` is not 2-edge-connected."""
    if not is_two_edge_connected(g):
        return math.inf, None
    if g.n == 1:
        return 0, []
    d = ecss_to_scsps(g)
    opt, sol = engine(d)
    if sol is None:
        return opt, None
    pairs = _undo_double_bridges(g, {d.arcs[i] for i in sol})
    edges = sorted({(min(u, v), max(u, v)) for u, v in pairs})
    return opt, edges


# -- MEG -----------------------------------------------------------------------

def solve_meg(d: Digraph, engine: Engine = exact_engine) -> tuple:
    """Minimum reachability-preserving arc subset: an optimal spanning solution
    inside every SCC plus one witness arc per arc of the transitively reduced
    condensation. Returns ``(optimum, ArcSet)``."""
    cond = condensation(d)
    chosen = set()
    total = 0
    for c in range(cond.count):
        members = cond.members(c)
        if len(members) < 2:
            continue
        label = {v: i for i, v in enumerate(members, start=1)}
        inner = [(label[u], label[v]) for u, v in d.arcs if u in label and v in label]
        sub = Digraph(len(members), tuple(inner))
        opt, sol = engine(sub)
        total += opt
        chosen.update((members[u - 1], members[v - 1]) for u, v in (sub.arcs[i] for i in sol))
    quotient = Digraph(cond.count, tuple((a + 1, b + 1) for a, b in cond.quotient_arcs))
    for i in transitive_reduction_dag(quotient):
        a, b = quotient.arcs[i]
        chosen.add(cond.witness[(a - 1, b - 1)])
        total += 1
    return total, d.arc_set(chosen)


# -- Set Cover -----------------------------------------------------------------

def setcover_layout(sc: SetCoverInstance) -> dict:
    """Vertex labels of the gadget: ``s``, ``t``, ``u_j`` for elements, ``v_i`` for sets."""
    return {
        "s": 1,
        "t": 2,
        "u": {j: 2 + j for j in range(1, sc.n + 1)},
        "v": {i: 2 + sc.n + i for i in range(1, sc.m + 1)},
    }


def setcover_to_scss(sc: SetCoverInstance) -> Digraph:
    """Terminals are the element vertices plus ``s``; a set cover of size
    ``k`` corresponds to a solution with ``k + 2n + 1`` arcs.

    Every path between element vertices already passes through ``s``, so
    marking it changes no optimum when ``n >= 2`` and keeps the relation for
    a one-element universe.
    """
    lay = setcover_layout(sc)
    s, t, u, v = lay["s"], lay["t"], lay["u"], lay["v"]
    arcs = [(t, s)]
    arcs += [(s, v[i]) for i in range(1, sc.m + 1)]
    for i, members in enumerate(sc.sets, start=1):
        arcs += [(v[i], u[j]) for j in sorted(members)]
    arcs += [(u[j], t) for j in range(1, sc.n + 1)]
    terminals = [s] + [u[j] for j in range(1, sc.n + 1)]
    return Digraph(sc.n + sc.m + 2, tuple(arcs), terminals, sc.k + 2 * sc.n + 1)
