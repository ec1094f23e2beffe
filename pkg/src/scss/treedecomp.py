"""Tree decompositions of the underlying undirected graph, and their
conversion into nice decompositions with one introduce-arc node per arc."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidDecomposition
from .graph import Digraph, Graph

LEAF = "leaf"
INTRODUCE_VERTEX = "introduce_vertex"
INTRODUCE_ARC = "introduce_arc"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags keyed by id (PACE numbering starts at 1) and undirected tree edges."""

    bags: dict
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags", {int(k): frozenset(v) for k, v in self.bags.items()})
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))

    @property
    def width(self):
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbours(self) -> dict:
        adj = {k: [] for k in self.bags}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class Violation:
    kind: str  # "tree" | "coverage" | "connectivity" | "range"
    detail: str


def _edges_of(g) -> list:
    if isinstance(g, Digraph):
        return g.underlying_edges()
    return list(g.edges)


def validate(td: TreeDecomposition, g) -> list:
    """List every violated tree-decomposition condition for ``g`` (a Digraph
    or Graph); an empty list means the decomposition is valid."""
    out = []
    ids = list(td.bags)
    for a, b in td.edges:
        if a not in td.bags or b not in td.bags:
            out.append(Violation("tree", f"tree edge {a}-{b} references an unknown bag"))
    if out:
        return out
    if ids:
        if len(td.edges) != len(ids) - 1:
            out.append(Violation("tree", f"{len(td.edges)} tree edges for {len(ids)} bags"))
        adj = td.neighbours()
        seen = {ids[0]}
        queue = deque([ids[0]])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(ids):
            out.append(Violation("tree", "decomposition tree is disconnected"))
    for x, bag in td.bags.items():
        for v in bag:
            if not 1 <= v <= g.n:
                out.append(Violation("range", f"bag {x} holds vertex {v} outside 1..{g.n}"))
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in range(1, g.n + 1):
        if v not in covered:
            out.append(Violation("coverage", f"vertex {v} lies in no bag"))
    for u, v in _edges_of(g):
        if not any(u in bag and v in bag for bag in td.bags.values()):
            out.append(Violation("coverage", f"edge {u}-{v} lies in no bag"))
    if not any(vi.kind == "tree" for vi in out):
        adj = td.neighbours()
        for v in sorted(covered):
            holders = [x for x in ids if v in td.bags[x]]
            seen = {holders[0]}
            queue = deque([holders[0]])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen and v in td.bags[y]:
                        seen.add(y)
                        queue.append(y)
            if len(seen) != len(holders):
                out.append(Violation("connectivity", f"bags holding vertex {v} are not connected"))
    return out


def heuristic_td(g) -> TreeDecomposition:
    """Min-fill elimination ordering on the underlying undirected graph
    (ties broken by smaller degree, then smaller vertex id)."""
    adj = {v: set() for v in range(1, g.n + 1)}
    for u, v in _edges_of(g):
        adj[u].add(v)
        adj[v].add(u)
    remaining = set(adj)
    order = []
    bag_of = {}
    while remaining:
        best = None
        for v in sorted(remaining):
            nb = sorted(adj[v])
            fill = 0
            for i, a in enumerate(nb):
                for b in nb[i + 1:]:
                    if b not in adj[a]:
                        fill += 1
            key = (fill, len(nb), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        nb = adj[v]
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        bag_of[v] = frozenset(nb | {v})
        order.append(v)
        remaining.remove(v)
        adj[v] = set()
    pos = {v: i for i, v in enumerate(order)}
    bags = {}
    edges = []
    for i, v in enumerate(order, start=1):
        bags[i] = bag_of[v]
    roots = []
    for i, v in enumerate(order, start=1):
        later = [u for u in bag_of[v] if u != v]
        if later:
            nxt = min(later, key=pos.__getitem__)
            edges.append((i, pos[nxt] + 1))
        else:
            roots.append(i)
    # Link the components of the elimination forest into one tree.
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    if not bags:
        bags[1] = frozenset()
    return TreeDecomposition(bags, tuple(edges))


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple
    children: tuple = ()
    vertex: Optional[int] = None
    arc: Optional[tuple] = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes are stored children-before-parents; the root is the last node."""

    nodes: tuple

    @property
    def root(self):
        return len(self.nodes) - 1

    @property
    def width(self):
        return max(len(x.bag) for x in self.nodes) - 1

    def __len__(self):
        return len(self.nodes)


class _Builder:
    def __init__(self):
        self.nodes = []

    def add(self, kind, bag, children=(), vertex=None, arc=None):
        self.nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(children), vertex, arc))
        return len(self.nodes) - 1


def _reshape(b: _Builder, node: int, target: frozenset) -> int:
    """Forget then introduce vertices until ``node``'s bag equals ``target``."""
    bag = set(b.nodes[node].bag)
    for v in sorted(bag - target):
        bag.discard(v)
        node = b.add(FORGET, bag, (node,), vertex=v)
    for v in sorted(target - bag):
        bag.add(v)
        node = b.add(INTRODUCE_VERTEX, bag, (node,), vertex=v)
    return node


def make_nice(td: TreeDecomposition, d: Digraph) -> NiceTreeDecomposition:
    """Convert a valid decomposition of ``d`` into a nice one of equal width."""
    problems = validate(td, d)
    if problems:
        raise InvalidDecomposition("; ".join(p.detail for p in problems))
    b = _Builder()
    adj = td.neighbours()
    root_bag = min(td.bags)
    parent = {root_bag: None}
    post = []
    stack = [(root_bag, False)]
    while stack:
        x, done = stack.pop()
        if done:
            post.append(x)
            continue
        stack.append((x, True))
        for y in sorted(adj[x], reverse=True):
            if y != parent[x]:
                parent[y] = x
                stack.append((y, False))
    built = {}
    for x in post:
        target = td.bags[x]
        kids = [_reshape(b, built[y], target)
                for y in sorted(adj[x]) if y != parent[x]]
        if not kids:
            node = _reshape(b, b.add(LEAF, ()), target)
        else:
            node = kids[0]
            for k in kids[1:]:
                node = b.add(JOIN, target, (node, k))
        built[x] = node
    top = _reshape(b, built[root_bag], frozenset())
    skeleton = b.nodes[: top + 1]
    return _attach_arcs(skeleton, d)


def _attach_arcs(skeleton: list, d: Digraph) -> NiceTreeDecomposition:
    # Each arc goes directly above the highest post-order node containing both ends.
    host = {}
    for idx, (u, v) in enumerate(d.arcs):
        best = None
        for i, node in enumerate(skeleton):
            if u in node.bag and v in node.bag:
                best = i
        if best is None:
            raise InvalidDecomposition(f"no bag contains both ends of arc ({u},{v})")
        host.setdefault(best, []).append((u, v))
    nodes = []
    remap = {}
    for i, node in enumerate(skeleton):
        nodes.append(NiceNode(node.kind, node.bag,
                              tuple(remap[c] for c in node.children),
                              node.vertex, node.arc))
        cur = len(nodes) - 1
        for arc in host.get(i, ()):
            nodes.append(NiceNode(INTRODUCE_ARC, node.bag, (cur,), arc=arc))
            cur = len(nodes) - 1
        remap[i] = cur
    return NiceTreeDecomposition(tuple(nodes))


def validate_nice(ntd: NiceTreeDecomposition, d: Digraph) -> list:
    """Structural audit of a nice decomposition; returns a list of messages."""
    out = []
    nodes = ntd.nodes
    if not nodes:
        return ["no nodes"]
    if nodes[-1].bag:
        out.append("root bag is not empty")
    parents = [0] * len(nodes)
    introduced = {}
    for i, x in enumerate(nodes):
        for c in x.children:
            if c >= i:
                out.append(f"node {i} has child {c} not preceding it")
                continue
            parents[c] += 1
        kids = [nodes[c] for c in x.children]
        if x.kind == LEAF:
            if x.children or x.bag:
                out.append(f"leaf {i} malformed")
        elif x.kind == INTRODUCE_VERTEX:
            if len(kids) != 1 or x.vertex in kids[0].bag or \
                    set(x.bag) != set(kids[0].bag) | {x.vertex}:
                out.append(f"introduce-vertex {i} malformed")
        elif x.kind == FORGET:
            if len(kids) != 1 or x.vertex not in kids[0].bag or \
                    set(x.bag) != set(kids[0].bag) - {x.vertex}:
                out.append(f"forget {i} malformed")
        elif x.kind == INTRODUCE_ARC:
            u, v = x.arc
            if len(kids) != 1 or kids[0].bag != x.bag or u not in x.bag or v not in x.bag:
                out.append(f"introduce-arc {i} malformed")
            introduced[x.arc] = introduced.get(x.arc, 0) + 1
        elif x.kind == JOIN:
            if len(kids) != 2 or kids[0].bag != x.bag or kids[1].bag != x.bag:
                out.append(f"join {i} malformed")
        else:
            out.append(f"node {i} has unknown kind {x.kind}")
    for i, p in enumerate(parents[:-1]):
        if p != 1:
            out.append(f"node {i} has {p} parents")
    if parents[-1] != 0:
        out.append("root has a parent")
    for arc in d.arcs:
        if introduced.get(arc, 0) != 1:
            out.append(f"arc {arc} introduced {introduced.get(arc, 0)} times")
    for arc in introduced:
        if not d.has_arc(*arc):
            out.append(f"unknown arc {arc} introduced")
    forgotten = {}
    intro_v = {}
    for x in nodes:
        if x.kind == FORGET:
            forgotten[x.vertex] = forgotten.get(x.vertex, 0) + 1
        if x.kind == INTRODUCE_VERTEX:
            intro_v[x.vertex] = intro_v.get(x.vertex, 0) + 1
    for v in range(1, d.n + 1):
        if forgotten.get(v, 0) != 1:
            out.append(f"vertex {v} forgotten {forgotten.get(v, 0)} times")
    return out
