"""Exhaustive ground truth for tiny instances.

Everything here enumerates explicitly (arc subsets, branchings, cuts, simple
paths) and shares no code with the engines it is used to check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from .errors import TooLarge
from .graph import Digraph, Graph


def _arc_masks(d: Digraph):
    return [(u, v) for u, v in d.arcs]


def _closure(start: int, succ_masks: list) -> int:
    reach = 1 << start
    frontier = reach
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= succ_masks[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~reach
        reach |= nxt
    return reach


def _strongly_connects(n, arcs, tmask, root):
    succ = [0] * (n + 1)
    pred = [0] * (n + 1)
    for u, v in arcs:
        succ[u] |= 1 << v
        pred[v] |= 1 << u
    return (_closure(root, succ) & tmask) == tmask and (_closure(root, pred) & tmask) == tmask


def brute_scss(d: Digraph, max_arcs: int = 22):
    """Minimum number of arcs strongly connecting the terminals (``math.inf`` if impossible)."""
    if d.m > max_arcs:
        raise TooLarge(f"{d.m} arcs exceed the brute-force limit {max_arcs}")
    terms = d.terminals
    if len(terms) <= 1:
        return 0
    tmask = sum(1 << v for v in terms)
    arcs = _arc_masks(d)
    if not _strongly_connects(d.n, arcs, tmask, terms[0]):
        return math.inf
    for k in range(len(terms), d.m + 1):
        for sub in combinations(arcs, k):
            if _strongly_connects(d.n, sub, tmask, terms[0]):
                return k
    return math.inf


def brute_scss_solution(d: Digraph, max_arcs: int = 22):
    """An optimal arc list, or None."""
    if d.m > max_arcs:
        raise TooLarge(f"{d.m} arcs exceed the brute-force limit {max_arcs}")
    terms = d.terminals
    if len(terms) <= 1:
        return []
    tmask = sum(1 << v for v in terms)
    for k in range(len(terms), d.m + 1):
        for sub in combinations(d.arcs, k):
            if _strongly_connects(d.n, sub, tmask, terms[0]):
                return list(sub)
    return None


def brute_scsps(d: Digraph, max_arcs: int = 22):
    return brute_scss(d.with_terminals(range(1, d.n + 1)), max_arcs)


def _reach_rows(n, arcs):
    succ = [0] * (n + 1)
    for u, v in arcs:
        succ[u] |= 1 << v
    return [0] + [_closure(v, succ) for v in range(1, n + 1)]


def brute_meg(d: Digraph, max_arcs: int = 22):
    """Minimum arc subset with the same reachability relation; returns (size, arcs)."""
    if d.m > max_arcs:
        raise TooLarge(f"{d.m} arcs exceed the brute-force limit {max_arcs}")
    target = _reach_rows(d.n, d.arcs)
    for k in range(0, d.m + 1):
        for sub in combinations(d.arcs, k):
            if _reach_rows(d.n, sub) == target:
                return k, list(sub)
    raise AssertionError("the full arc set always preserves reachability")


def _two_edge_connected(n, edges):
    if n <= 1:
        return True
    adj = {v: set() for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def connected(skip):
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if (min(x, y), max(x, y)) == skip or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        return len(seen) == n

    if not connected(None):
        return False
    return all(connected(e) for e in edges)


def brute_2ecss(g: Graph, max_edges: int = 20):
    """Minimum 2-edge-connected spanning subgraph size (``math.inf`` if none)."""
    if len(g.edges) > max_edges:
        raise TooLarge(f"{len(g.edges)} edges exceed the brute-force limit {max_edges}")
    if g.n <= 1:
        return 0
    for k in range(g.n, len(g.edges) + 1):
        for sub in combinations(g.edges, k):
            if _two_edge_connected(g.n, sub):
                return k
    return math.inf


@dataclass(frozen=True)
class SetCoverInstance:
    n: int
    sets: tuple
    k: int = 0

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if not s or not s <= set(range(1, self.n + 1)):
                raise ValueError(f"set {sorted(s)} is empty or leaves the universe 1..{self.n}")
        object.__setattr__(self, "sets", sets)

    @property
    def m(self):
        return len(self.sets)


def brute_set_cover(sc: SetCoverInstance, max_sets: int = 20):
    if sc.m > max_sets:
        raise TooLarge(f"{sc.m} sets exceed the brute-force limit {max_sets}")
    universe = set(range(1, sc.n + 1))
    for k in range(0, sc.m + 1):
        for pick in combinations(sc.sets, k):
            if set().union(*pick) >= universe:
                return k
    return math.inf


# -- relaxed branching pairs and cuts ------------------------------------------

@dataclass(frozen=True)
class RelaxedPair:
    b_in: frozenset
    b_out: frozenset
    vertices: frozenset


def weak_components(vertices, arcs) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in arcs:
        parent[find(u)] = find(v)
    return len({find(v) for v in vertices})


def is_relaxed_pair(p: RelaxedPair, r, terminals=()) -> bool:
    vs = p.vertices
    if r not in vs or not set(terminals) <= vs:
        return False
    for arcs, side in ((p.b_in, 0), (p.b_out, 1)):
        deg = {v: 0 for v in vs}
        for a in arcs:
            if a[0] not in vs or a[1] not in vs:
                return False
            deg[a[side]] += 1
        if deg[r] != 0 or any(deg[v] != 1 for v in vs if v != r):
            return False
    return True


def consistent_cuts(vertices, arcs, r) -> int:
    """Number of bipartitions with ``r`` on side 0 that no arc crosses."""
    others = sorted(set(vertices) - {r})
    count = 0
    for bits in product((0, 1), repeat=len(others)):
        side = dict(zip(others, bits))
        side[r] = 0
        if all(side[u] == side[v] for u, v in arcs):
            count += 1
    return count


def count_consistent_cut_pairs(p: RelaxedPair, r) -> int:
    return consistent_cuts(p.vertices, p.b_in, r) * consistent_cuts(p.vertices, p.b_out, r)


def closed_form_cut_pairs(p: RelaxedPair) -> int:
    return 2 ** ((weak_components(p.vertices, p.b_in) - 1)
                 + (weak_components(p.vertices, p.b_out) - 1))


def relaxed_pairs(d: Digraph, r):
    """Yield every compatible relaxed (in, out) branching pair rooted at ``r``."""
    terminals = set(d.terminals) | {r}
    free = [v for v in d.vertices if v not in terminals]
    for pick in product((False, True), repeat=len(free)):
        vs = terminals | {v for v, keep in zip(free, pick) if keep}
        nonroot = sorted(vs - {r})
        out_choices = [[(v, x) for x in sorted(vs) if d.has_arc(v, x)] for v in nonroot]
        in_choices = [[(x, v) for x in sorted(vs) if d.has_arc(x, v)] for v in nonroot]
        if any(not c for c in out_choices) or any(not c for c in in_choices):
            continue
        for b_in in product(*out_choices):
            for b_out in product(*in_choices):
                yield RelaxedPair(frozenset(b_in), frozenset(b_out), frozenset(vs))


def relaxed_pair_counts(d: Digraph, r, weights) -> dict:
    """``{(i, W): [R, S, C]}``: candidate pairs, connected pairs, and
    (pair, cut, cut) tuples with ``i`` union arcs and total weight ``W``."""
    if d.n > 5:
        raise TooLarge("relaxed-pair enumeration is limited to n <= 5")
    out = {}
    for p in relaxed_pairs(d, r):
        w = sum(weights.w_in[d.arc_index(*a)] for a in p.b_in) + \
            sum(weights.w_out[d.arc_index(*a)] for a in p.b_out)
        i = len(p.b_in | p.b_out)
        slot = out.setdefault((i, w), [0, 0, 0])
        slot[0] += 1
        if weak_components(p.vertices, p.b_in) == 1 and weak_components(p.vertices, p.b_out) == 1:
            slot[1] += 1
        slot[2] += count_consistent_cut_pairs(p, r)
    return out


def enumerate_relaxed_pairs(d: Digraph, r, weights, W) -> tuple:
    """``(|R_W|, |S_W|, |C_W|)`` restricted to pairs using at most ``t`` arcs."""
    totals = [0, 0, 0]
    for (i, w), counts in relaxed_pair_counts(d, r, weights).items():
        if w == W and i <= d.budget:
            for k in range(3):
                totals[k] += counts[k]
    return tuple(totals)


# -- simple paths and ears -------------------------------------------------------

def simple_paths(d: Digraph, s, t):
    """Yield vertex sequences of simple ``s -> t`` paths (cycles through ``s`` if ``s == t``)."""
    succ = d.successors()

    def dfs(path, seen):
        u = path[-1]
        for v in succ[u]:
            if v == t and (s != t or len(path) >= 2):
                yield path + [v]
            elif v not in seen and v != t:
                seen.add(v)
                yield from dfs(path + [v], seen)
                seen.discard(v)

    yield from dfs([s], {s})


def brute_path_table(d: Digraph, s, t) -> dict:
    """``{internal-vertex bitmask (bit v-1): |X| + 1}`` for realizable internal sets."""
    out = {}
    for path in simple_paths(d, s, t):
        inner = path[1:-1]
        mask = sum(1 << (v - 1) for v in inner)
        out[mask] = len(inner) + 1
    return out


def brute_ear_tables(d: Digraph, max_q=None) -> dict:
    """``{(q, X): cost}`` minimum total ear length over sequences of exactly
    ``q`` ears covering vertex set ``X`` (bit v-1), found by extending explicit
    cycles with explicit ears one at a time. Arcs are counted once per ear."""
    if d.n > 7:
        raise TooLarge("ear enumeration is limited to n <= 7")
    max_q = d.n - 1 if max_q is None else max_q
    ears = []  # (start, end, internal mask, length)
    for s in d.vertices:
        for t in d.vertices:
            for path in simple_paths(d, s, t):
                inner = sum(1 << (v - 1) for v in path[1:-1])
                ears.append((s, t, inner, len(path) - 1))
    best = {}
    layer = {}
    for s, t, inner, length in ears:
        if s == t:
            mask = inner | (1 << (s - 1))
            if length < layer.get(mask, math.inf):
                layer[mask] = length
    for mask, c in layer.items():
        best[(1, mask)] = c
    for q in range(2, max_q + 1):
        nxt = {}
        for mask, c in layer.items():
            for s, t, inner, length in ears:
                if not (mask >> (s - 1)) & 1 or not (mask >> (t - 1)) & 1 or inner & mask:
                    continue
                if s == t and not inner:
                    continue
                nm = mask | inner
                if c + length < nxt.get(nm, math.inf):
                    nxt[nm] = c + length
        layer = nxt
        for mask, c in layer.items():
            best[(q, mask)] = c
    return best
