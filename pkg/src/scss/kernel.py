"""Polynomial kernel for the spanning variant parameterized by vertex cover.

Given a vertex cover ``S`` of the underlying graph, every vertex of
``I = V - S`` needs an arc in from ``S`` and an arc out to ``S``. Vertices of
``I`` are matched against ordered pairs ``(u, w)`` of ``S``; the unmatched
part of an expansion can be deleted at a cost of exactly two arcs each.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalInconsistency, InvalidReducedSolution
from .graph import ArcSet, Digraph, Graph, strongly_connected

EXACT_COVER_LIMIT = 12


@dataclass(frozen=True)
class VertexCover:
    vertices: frozenset
    exact: bool


def _edges_of(g) -> list:
    return list(g.edges) if isinstance(g, Graph) else g.underlying_edges()


def _bounded_cover(edges: list, k: int) -> Optional[set]:
    """Some cover of ``edges`` with at most ``k`` vertices, or None."""
    if not edges:
        return set()
    if k == 0:
        return None
    u, v = edges[0]
    # Branch on the endpoint of the first uncovered edge.
    for pick in (u, v):
        rest = [e for e in edges if pick not in e]
        sub = _bounded_cover(rest, k - 1)
        if sub is not None:
            sub.add(pick)
            return sub
    return None


def _greedy_cover(edges: list) -> set:
    cover = set()
    for u, v in edges:
        if u not in cover and v not in cover:
            cover.update((u, v))
    return cover


def vertex_cover(g, exact_limit: int = EXACT_COVER_LIMIT) -> VertexCover:
    """Minimum vertex cover by bounded search when one of size at most
    ``exact_limit`` exists, otherwise the endpoints of a maximal matching."""
    edges = _edges_of(g)
    for k in range(0, exact_limit + 1):
        found = _bounded_cover(edges, k)
        if found is not None:
            return VertexCover(frozenset(found), True)
    return VertexCover(frozenset(_greedy_cover(edges)), False)


@dataclass
class PairBipartite:
    """Left side: ordered pairs over the cover that have a witness in ``right``.
    ``adj[(u, w)]`` lists the ``v`` with arcs ``(u, v)`` and ``(v, w)``."""

    cover: tuple
    right: tuple
    left: tuple
    adj: dict

    def right_neighbours(self) -> dict:
        out = {v: [] for v in self.right}
        for pair in self.left:
            for v in self.adj[pair]:
                out[v].append(pair)
        return out


def pair_bipartite(d: Digraph, cover) -> PairBipartite:
    cover = tuple(sorted(cover))
    right = tuple(v for v in d.vertices if v not in set(cover))
    succ = {v: set(s) for v, s in d.successors().items()}
    pred = {v: set(p) for v, p in d.predecessors().items()}
    adj = {}
    for v in right:
        for u in sorted(pred[v]):
            for w in sorted(succ[v]):
                adj.setdefault((u, w), []).append(v)
    left = tuple(sorted(adj))
    return PairBipartite(cover, right, left, adj)


@dataclass
class ExpansionResult:
    a1: frozenset
    b1: frozenset
    matching: dict  # left -> right, restricted to a1


def maximum_matching(left, adj: dict) -> dict:
    """Left-to-right maximum matching by augmenting paths."""
    match_l, match_r = {}, {}

    def augment(a, seen):
        for b in adj.get(a, ()):
            if b in seen:
                continue
            seen.add(b)
            if b not in match_r or augment(match_r[b], seen):
                match_l[a] = b
                match_r[b] = a
                return True
        return False

    for a in left:
        augment(a, set())
    return match_l


def check_expansion(b: PairBipartite, e: ExpansionResult) -> None:
    rn = b.right_neighbours()
    if set(e.matching) != set(e.a1):
        raise InternalInconsistency("matching does not saturate A1")
    if len(set(e.matching.values())) != len(e.matching):
        raise InternalInconsistency("matching reuses a right vertex")
    for a, v in e.matching.items():
        if v not in e.b1 or v not in b.adj[a]:
            raise InternalInconsistency(f"partner {v} of {a} is not a B1 neighbour")
    for v in e.b1:
        if not set(rn[v]) <= e.a1:
            raise InternalInconsistency(f"neighbourhood of {v} leaves A1")
    if len(b.right) - len(e.b1) > len(b.left) - len(e.a1):
        raise InternalInconsistency("|B - B1| exceeds |A - A1|")


def expansion(b: PairBipartite) -> ExpansionResult:
    """Sets ``A1``, ``B1`` and a matching saturating ``A1`` into ``B1`` with
    ``N(B1) subset A1``. The properties are verified before returning."""
    match_l = maximum_matching(b.left, b.adj)
    match_r = {v: a for a, v in match_l.items()}
    rn = b.right_neighbours()
    start = [v for v in b.right if v not in match_r]
    reach_r, reach_l = set(start), set()
    stack = list(start)
    while stack:
        v = stack.pop()
        for a in rn[v]:
            if a in reach_l or match_l.get(a) == v:
                continue
            reach_l.add(a)
            mate = match_l.get(a)
            if mate is None:
                raise InternalInconsistency("augmenting path left after maximum matching")
            if mate not in reach_r:
                reach_r.add(mate)
                stack.append(mate)
    a1 = frozenset(reach_l)
    result = ExpansionResult(a1, frozenset(reach_r), {a: match_l[a] for a in sorted(a1)})
    check_expansion(b, result)
    return result


def canonical_no() -> Digraph:
    """Two vertices, no arcs, budget 0: never strongly connected."""
    return Digraph(2, (), None, 0)


@dataclass
class KernelTrace:
    removed: tuple = ()
    budget_delta: int = 0
    kept: tuple = ()  # kept[i] is the original label of reduced vertex i + 1
    lift_pairs: dict = field(default_factory=dict)  # removed vertex -> (u, w)
    cover: tuple = ()
    cover_exact: bool = True
    bipartite: Optional[PairBipartite] = None
    expansion: Optional[ExpansionResult] = None
    canonical_no: bool = False
    reason: str = ""


def kernelize(d: Digraph, exact_limit: int = EXACT_COVER_LIMIT) -> tuple:
    """Apply the reduction rule once; returns ``(reduced, trace)``."""
    ident = tuple(d.vertices)
    spanning = d.with_terminals(ident)
    if d.n == 1:
        return spanning, KernelTrace(kept=ident, reason="single vertex")
    if not strongly_connected(spanning):
        return canonical_no(), KernelTrace(canonical_no=True, reason="not strongly connected")
    vc = vertex_cover(spanning, exact_limit)
    b = pair_bipartite(spanning, vc.vertices)
    base = dict(cover=b.cover, cover_exact=vc.exact, bipartite=b)
    covered = set()
    for vs in b.adj.values():
        covered.update(vs)
    if any(v not in covered for v in b.right):
        return canonical_no(), KernelTrace(canonical_no=True, reason="vertex with empty pair-neighbourhood", **base)
    k = len(b.cover)
    if len(b.right) <= k * k:
        return spanning, KernelTrace(kept=ident, reason="rule not triggered", **base)
    e = expansion(b)
    used = set(e.matching.values())
    removed = tuple(sorted(v for v in e.b1 if v not in used))
    rn = b.right_neighbours()
    lift = {v: min(rn[v]) for v in removed}
    budget = d.budget - 2 * len(removed)
    trace = KernelTrace(removed, 2 * len(removed), (), lift, expansion=e, **base)
    if budget < 0:
        trace.canonical_no = True
        trace.reason = "budget exhausted"
        return canonical_no(), trace
    gone = set(removed)
    kept = tuple(v for v in d.vertices if v not in gone)
    label = {v: i for i, v in enumerate(kept, start=1)}
    arcs = tuple((label[u], label[v]) for u, v in d.arcs if u in label and v in label)
    trace.kept = kept
    trace.reason = f"removed {len(removed)} vertices"
    return Digraph(len(kept), arcs, None, budget), trace


def lift_solution(original: Digraph, reduced_solution, trace: KernelTrace, reduced: Optional[Digraph] = None) -> ArcSet:
    """Map a solution of the reduced instance back and add two arcs per removed vertex.

    ``reduced_solution`` is an ``ArcSet`` of the reduced instance (pass
    ``reduced``) or an iterable of reduced-label arc pairs.
    """
    if trace.canonical_no:
        raise InvalidReducedSolution("the reduced instance is a NO-instance")
    pairs = _as_pairs(reduced_solution, reduced)
    n_red = len(trace.kept)
    for u, v in pairs:
        if not (1 <= u <= n_red and 1 <= v <= n_red):
            raise InvalidReducedSolution(f"arc ({u},{v}) is outside the reduced instance")
    lifted = [(trace.kept[u - 1], trace.kept[v - 1]) for u, v in pairs]
    for x in trace.removed:
        u, w = trace.lift_pairs[x]
        lifted += [(u, x), (x, w)]
    try:
        result = original.arc_set(lifted)
    except KeyError as exc:
        raise InvalidReducedSolution(f"arc {exc.args[0]} does not exist in the original") from None
    if n_red > 1 and not strongly_connected(Digraph(n_red, tuple(pairs))):
        raise InvalidReducedSolution("reduced solution is not strongly connected")
    return result


def _as_pairs(solution, reduced: Optional[Digraph]) -> list:
    items = list(solution)
    if items and isinstance(items[0], int):
        if reduced is None:
            raise InvalidReducedSolution("an ArcSet needs the reduced digraph to be resolved")
        return sorted(reduced.arcs[i] for i in items)
    return sorted(set(tuple(a) for a in items))


def trace_to_json(trace: KernelTrace) -> dict:
    """The part of a trace needed for lifting, as plain JSON data."""
    return {
        "removed": list(trace.removed),
        "budget_delta": trace.budget_delta,
        "kept": list(trace.kept),
        "lift_pairs": {str(v): list(p) for v, p in sorted(trace.lift_pairs.items())},
        "cover": list(trace.cover),
        "cover_exact": trace.cover_exact,
        "canonical_no": trace.canonical_no,
        "reason": trace.reason,
    }


def trace_from_json(data: dict) -> KernelTrace:
    return KernelTrace(
        removed=tuple(data["removed"]),
        budget_delta=data["budget_delta"],
        kept=tuple(data["kept"]),
        lift_pairs={int(v): tuple(p) for v, p in data["lift_pairs"].items()},
        cover=tuple(data["cover"]),
        cover_exact=data["cover_exact"],
        canonical_no=data["canonical_no"],
        reason=data.get("reason", ""),
    )
