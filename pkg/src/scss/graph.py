"""Digraph and undirected-graph carriers plus reachability utilities.

Vertices are the integers ``1..n``. Arc subsets (``ArcSet``) are frozensets
of indices into ``Digraph.arcs``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CyclicInput, RangeError

ArcSet = frozenset


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple
    terminals: tuple = None
    budget: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        arcs = tuple((int(u), int(v)) for u, v in self.arcs)
        seen = {}
        for idx, (u, v) in enumerate(arcs):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise RangeError(f"arc ({u},{v}) out of range 1..{self.n}")
            if u == v:
                raise RangeError(f"self-loop at {u}")
            if (u, v) in seen:
                raise RangeError(f"duplicate arc ({u},{v})")
            seen[(u, v)] = idx
        if self.terminals is None:
            terminals = tuple(range(1, self.n + 1))
        else:
            terminals = tuple(sorted(set(int(v) for v in self.terminals)))
        for v in terminals:
            if not 1 <= v <= self.n:
                raise RangeError(f"terminal {v} out of range 1..{self.n}")
        if self.budget < 0:
            raise RangeError("budget must be nonnegative")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "terminals", terminals)
        object.__setattr__(self, "_index", seen)

    @property
    def m(self):
        return len(self.arcs)

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def arc_index(self, u, v):
        return self._index[(u, v)]

    def has_arc(self, u, v):
        return (u, v) in self._index

    def all_arcs(self) -> ArcSet:
        return frozenset(range(len(self.arcs)))

    def arc_set(self, pairs: Iterable) -> ArcSet:
        """Translate ``(u, v)`` pairs into an ``ArcSet``; raises KeyError on unknown arcs."""
        return frozenset(self._index[(u, v)] for u, v in pairs)

    def arcs_of(self, x: Iterable[int]) -> list:
        return sorted(self.arcs[i] for i in x)

    def with_terminals(self, terminals, budget=None) -> "Digraph":
        return Digraph(self.n, self.arcs, terminals,
                       self.budget if budget is None else budget)

    def with_budget(self, budget) -> "Digraph":
        return Digraph(self.n, self.arcs, self.terminals, budget)

    def underlying_edges(self) -> list:
        """Edges ``(u, v)`` with ``u < v`` of the underlying undirected simple graph."""
        return sorted({(min(u, v), max(u, v)) for u, v in self.arcs})

    def successors(self, x: Optional[Iterable[int]] = None) -> dict:
        out = {v: [] for v in self.vertices}
        for i in (range(len(self.arcs)) if x is None else x):
            u, v = self.arcs[i]
            out[u].append(v)
        return out

    def predecessors(self, x: Optional[Iterable[int]] = None) -> dict:
        inc = {v: [] for v in self.vertices}
        for i in (range(len(self.arcs)) if x is None else x):
            u, v = self.arcs[i]
            inc[v].append(u)
        return inc


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``1..n``; edges stored as ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple
    budget: int = 0

    def __post_init__(self):
        edges = []
        seen = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise RangeError(f"edge {{{u},{v}}} out of range 1..{self.n}")
            if u == v:
                raise RangeError(f"self-loop at {u}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise RangeError(f"duplicate edge {{{u},{v}}}")
            seen.add(e)
            edges.append(e)
        if self.budget < 0:
            raise RangeError("budget must be nonnegative")
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def adjacency(self, edges: Optional[Iterable] = None) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in (self.edges if edges is None else edges):
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class Condensation:
    """SCC structure of a digraph.

    ``component[v]`` is the component id of vertex ``v`` (index 0 unused);
    ids are numbered in a topological order of the quotient DAG.
    ``witness`` maps each quotient arc to the lexicographically smallest
    original arc realizing it.
    """

    component: tuple
    count: int
    quotient_arcs: tuple
    witness: dict

    def members(self, c) -> list:
        return [v for v in range(1, len(self.component)) if self.component[v] == c]


def reachable_from(adj: dict, source) -> set:
    seen = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def terminals_mutually_reachable(d: Digraph, x: Iterable[int], t_set) -> bool:
    """True iff every ordered pair of ``t_set`` is joined by a path using only arcs of ``x``."""
    t_set = list(t_set)
    if len(t_set) <= 1:
        return True
    x = list(x)
    root = t_set[0]
    fwd = reachable_from(d.successors(x), root)
    if any(v not in fwd for v in t_set):
        return False
    bwd = reachable_from(d.predecessors(x), root)
    return all(v in bwd for v in t_set)


def strongly_connected(d: Digraph, x: Optional[Iterable[int]] = None) -> bool:
    return terminals_mutually_reachable(d, d.all_arcs() if x is None else x, d.vertices)


def scc_labels(n: int, succ: dict) -> list:
    """Iterative Tarjan. Returns ``label[v]`` (index 0 unused) with labels in
    reverse topological order of the quotient (sinks first)."""
    index = [0] * (n + 1)
    low = [0] * (n + 1)
    on_stack = [False] * (n + 1)
    label = [-1] * (n + 1)
    stack = []
    counter = 1
    ncomp = 0
    for start in range(1, n + 1):
        if index[start]:
            continue
        work = [(start, iter(succ[start]))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if not index[v]:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, iter(succ[v])))
                    advanced = True
                    break
                if on_stack[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    label[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
    return label


def condensation(d: Digraph) -> Condensation:
    label = scc_labels(d.n, d.successors())
    count = max(label[1:], default=-1) + 1
    # Tarjan emits sinks first; flip so ids follow a topological order.
    comp = tuple([-1] + [count - 1 - label[v] for v in d.vertices])
    witness = {}
    for u, v in sorted(d.arcs):
        cu, cv = comp[u], comp[v]
        if cu != cv and (cu, cv) not in witness:
            witness[(cu, cv)] = (u, v)
    return Condensation(comp, count, tuple(sorted(witness)), witness)


def topological_order(n: int, arcs: Iterable) -> Optional[list]:
    """Kahn's algorithm on vertices ``1..n``; None if a cycle exists."""
    succ = {v: [] for v in range(1, n + 1)}
    indeg = [0] * (n + 1)
    for u, v in arcs:
        succ[u].append(v)
        indeg[v] += 1
    queue = deque(v for v in range(1, n + 1) if indeg[v] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return order if len(order) == n else None


def transitive_reduction_dag(dag: Digraph) -> ArcSet:
    """Unique minimum arc subset of a DAG with the same reachability relation."""
    order = topological_order(dag.n, dag.arcs)
    if order is None:
        raise CyclicInput("transitive reduction requires an acyclic digraph")
    succ = dag.successors()
    reach = [0] * (dag.n + 1)  # bitmask of vertices reachable by paths of length >= 1
    for u in reversed(order):
        r = 0
        for v in succ[u]:
            r |= (1 << v) | reach[v]
        reach[u] = r
    keep = []
    for idx, (u, v) in enumerate(dag.arcs):
        if not any((reach[w] >> v) & 1 for w in succ[u] if w != v):
            keep.append(idx)
    return frozenset(keep)


def reachability_matrix(n: int, arcs: Iterable) -> list:
    """``rows[u]`` is the bitmask of vertices reachable from ``u`` (including ``u``)."""
    succ = {v: [] for v in range(1, n + 1)}
    for u, v in arcs:
        succ[u].append(v)
    rows = [0] * (n + 1)
    for u in range(1, n + 1):
        mask = 0
        for v in reachable_from(succ, u):
            mask |= 1 << v
        rows[u] = mask
    return rows


def is_two_edge_connected(g: Graph, edges: Optional[Iterable] = None) -> bool:
    """Connected and bridgeless on all ``n`` vertices."""
    edges = list(g.edges if edges is None else edges)
    if g.n <= 1:
        return True
    adj = g.adjacency(edges)
    if len(reachable_from(adj, 1)) != g.n:
        return False
    return not bridges(g.n, edges)


def bridges(n: int, edges: list) -> list:
    """Bridges of a simple undirected graph via DFS low-links."""
    adj = {v: [] for v in range(1, n + 1)}
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    disc = [0] * (n + 1)
    low = [0] * (n + 1)
    timer = 1
    found = []
    for root in range(1, n + 1):
        if disc[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        work = [(root, -1, iter(adj[root]))]
        while work:
            u, via, it = work[-1]
            pushed = False
            for v, idx in it:
                if idx == via:
                    continue
                if not disc[v]:
                    disc[v] = low[v] = timer
                    timer += 1
                    work.append((v, idx, iter(adj[v])))
                    pushed = True
                    break
                low[u] = min(low[u], disc[v])
            if pushed:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[u])
                if low[u] > disc[p]:
                    found.append(edges[via])
    return found
