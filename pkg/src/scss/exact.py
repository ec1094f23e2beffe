"""Exact SCSS optimizer over vertex subsets via ear decompositions.

Vertex ``v`` is bit ``v - 1`` of a subset mask. ``T_q[X]`` is the least total
ear length of a decomposition with exactly ``q`` ears whose vertex set is
``X``; ``F_{s,t}[B] = |B| + 1`` when a simple ``s -> t`` path (a cycle through
``s`` if ``s == t``) has internal vertex set exactly ``B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import INF, _PRIME, minplus_subset_convolution, popcounts
from .errors import InternalInconsistency, TooManyVertices
from .graph import Digraph, terminals_mutually_reachable

DEFAULT_VERTEX_CAP = 16


def value_bound(n: int) -> int:
    return 2 * n - 2 + 1


@dataclass
class PathTables:
    """``walks[s-1][X, v-1]`` is True iff a simple path from ``s`` to ``v``
    has internal vertex set exactly ``X`` (``s, v`` not in ``X``)."""

    n: int
    walks: np.ndarray
    adj: np.ndarray

    def reach(self, s: int, t: int) -> np.ndarray:
        """Boolean table of internal sets realizable by an ``s -> t`` ear."""
        if s != t:
            return self.walks[s - 1][:, t - 1]
        size = 1 << self.n
        idx = np.arange(size)
        out = np.zeros(size, dtype=bool)
        w = self.walks[s - 1]
        for u in range(self.n):
            if not self.adj[u, s - 1]:
                continue
            has = (idx >> u) & 1 == 1
            out[has] |= w[idx[has] ^ (1 << u), u]
        return out

    def table(self, s: int, t: int) -> np.ndarray:
        pc = popcounts(self.n).astype(np.int64)
        return np.where(self.reach(s, t), pc + 1, INF)

    def path(self, s: int, t: int, inner: int) -> list:
        """Vertex sequence of one ear from ``s`` to ``t`` with internal set ``inner``."""
        w = self.walks[s - 1]
        seq = [t]
        end = t
        mask = inner
        while True:
            if mask == 0:
                if not self.adj[s - 1, end - 1]:
                    raise InternalInconsistency(f"no arc {s}->{end} while rebuilding an ear")
                seq.append(s)
                break
            for u in range(self.n):
                if (mask >> u) & 1 and self.adj[u, end - 1] and w[mask ^ (1 << u), u]:
                    seq.append(u + 1)
                    mask ^= 1 << u
                    end = u + 1
                    break
            else:
                raise InternalInconsistency(f"ear {s}->{t} over {inner:b} cannot be rebuilt")
        seq.reverse()
        return seq


def build_path_tables(d: Digraph, cap: int = DEFAULT_VERTEX_CAP) -> PathTables:
    n = d.n
    if n > cap:
        raise TooManyVertices(f"{n} vertices exceed the exact-engine cap {cap}")
    size = 1 << n
    adj = np.zeros((n, n), dtype=bool)
    for u, v in d.arcs:
        adj[u - 1, v - 1] = True
    pc = popcounts(n)
    idx = np.arange(size)
    member = ((idx[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)  # X contains v
    layers = [np.flatnonzero(pc == k) for k in range(n + 1)]
    walks = np.zeros((n, size, n), dtype=bool)
    for s in range(n):
        w = walks[s]
        w[0] = adj[s]
        w[0, s] = False
        for k in range(1, n):
            layer = layers[k]
            layer = layer[(layer >> s) & 1 == 0]
            for u in range(n):
                sel = layer[(layer >> u) & 1 == 1]
                if sel.size:
                    w[sel] |= w[sel ^ (1 << u), u][:, None] & adj[u][None, :]
            w[layer] &= ~member[layer]
            w[layer, s] = False
    return PathTables(n, walks, adj)


def initial_cycles(F: PathTables) -> np.ndarray:
    """``T_1[X] = min_a F_{a,a}[X - a]``, i.e. ``|X|`` when a cycle spans ``X``."""
    size = 1 << F.n
    idx = np.arange(size)
    pc = popcounts(F.n).astype(np.int64)
    out = np.full(size, INF, dtype=np.int64)
    for a in range(1, F.n + 1):
        has = (idx >> (a - 1)) & 1 == 1
        cyc = np.zeros(size, dtype=bool)
        cyc[has] = F.reach(a, a)[idx[has] ^ (1 << (a - 1))]
        out = np.where(cyc, np.minimum(out, pc), out)
    return out


def masked(T: np.ndarray, s: int, t: int) -> np.ndarray:
    """``S_{q-1,s,t}``: ``T`` where ``{s, t}`` is inside ``X``, INF elsewhere."""
    need = (1 << (s - 1)) | (1 << (t - 1))
    idx = np.arange(len(T))
    return np.where(idx & need == need, T, INF)


def _ranked_zeta(indicator: np.ndarray, n: int, pc: np.ndarray) -> dict:
    out = {}
    for k in np.unique(pc[indicator]).tolist():
        a = (indicator & (pc == k)).astype(np.int64)
        for i in range(n):
            view = a.reshape(-1, 2, 1 << i)
            view[:, 1, :] += view[:, 0, :]
        out[k] = a
    return out


def ear_step(T_prev: np.ndarray, F: PathTables, M: Optional[int] = None) -> np.ndarray:
    """``T_q[X] = min_{s,t} (S_{q-1,s,t} * F_{s,t})[X]`` with ``*`` the (min,+)
    subset convolution.

    All ordered pairs share one level-wise counting pass: the number of
    (pair, split) witnesses reaching each level is accumulated in the ranked
    zeta domain and inverted once, so ``T_q[X]`` is the smallest level whose
    witness count at ``X`` is positive. The ``{s, t} subset A`` mask is applied
    to the shared transform of ``T_{q-1}`` by inclusion-exclusion.
    """
    n = F.n
    M = value_bound(n) if M is None else M
    size = 1 << n
    pc = popcounts(n)
    idx = np.arange(size)
    T_prev = np.where(T_prev <= M, T_prev, INF)
    finite = T_prev < INF
    if not finite.any():
        return np.full(size, INF, dtype=np.int64)
    shared = {a: _ranked_zeta(T_prev == a, n, pc) for a in np.unique(T_prev[finite]).tolist()}
    levels = {}
    for s in range(1, n + 1):
        bs = 1 << (s - 1)
        for t in range(1, n + 1):
            reach = F.reach(s, t)
            if not reach.any():
                continue
            bt = 1 << (t - 1)
            need = bs | bt
            inside = idx & need == need
            sel = idx[inside]
            ear = _ranked_zeta(reach, n, pc)
            for a, rows in shared.items():
                for k, z in rows.items():
                    m = np.zeros(size, dtype=np.int64)
                    if s == t:
                        m[sel] = z[sel] - z[sel ^ bs]
                    else:
                        m[sel] = z[sel] - z[sel ^ bs] - z[sel ^ bt] + z[sel ^ need]
                    if not m.any():
                        continue
                    for j, e in ear.items():
                        if k + j > n or a + j + 1 > M:
                            continue
                        acc = levels.get(a + j + 1)
                        if acc is None:
                            acc = levels[a + j + 1] = np.zeros((n + 1, size), dtype=np.int64)
                        acc[k + j] += m * e
    out = np.full(size, INF, dtype=np.int64)
    open_ = np.ones(size, dtype=bool)
    for c in sorted(levels):
        acc = levels[c] % _PRIME
        for i in range(n):
            view = acc.reshape(n + 1, -1, 2, 1 << i)
            view[:, :, 1, :] -= view[:, :, 0, :]
            view[:, :, 1, :] %= _PRIME
        hit = open_ & (acc[pc, idx] != 0)
        out[hit] = c
        open_ &= ~hit
    return out


def ear_step_reference(T_prev: np.ndarray, F: PathTables, M: Optional[int] = None) -> np.ndarray:
    """Literal form: one masked (min,+) subset convolution per ordered pair."""
    n = F.n
    M = value_bound(n) if M is None else M
    T_prev = np.where(T_prev <= M, T_prev, INF)
    out = np.full(1 << n, INF, dtype=np.int64)
    for s in range(1, n + 1):
        for t in range(1, n + 1):
            f = F.table(s, t)
            f = np.where(f <= M, f, INF)
            u = minplus_subset_convolution(masked(T_prev, s, t), f, 2 * M)
            out = np.minimum(out, u)
    return np.where(out <= M, out, INF)


def ear_tables(d: Digraph, cap: int = DEFAULT_VERTEX_CAP, F: Optional[PathTables] = None) -> list:
    """``[T_1, ..., T_{n-1}]``."""
    F = build_path_tables(d, cap) if F is None else F
    M = value_bound(d.n)
    tables = [np.where(initial_cycles(F) <= M, initial_cycles(F), INF)]
    for _ in range(2, d.n):
        tables.append(ear_step(tables[-1], F, M))
    return tables


@dataclass
class ExactResult:
    optimum: float
    solution: Optional[frozenset]  # ArcSet
    q: Optional[int] = None
    vertex_mask: Optional[int] = None


def solve_exact(d: Digraph, cap: int = DEFAULT_VERTEX_CAP, reconstruct_solution: bool = True) -> ExactResult:
    """Minimum arc count of a subgraph strongly connecting ``d.terminals``."""
    if d.n > cap:
        raise TooManyVertices(f"{d.n} vertices exceed the exact-engine cap {cap}")
    if len(d.terminals) <= 1:
        return ExactResult(0, frozenset(), None, None)
    F = build_path_tables(d, cap)
    tables = ear_tables(d, cap, F)
    tmask = sum(1 << (v - 1) for v in d.terminals)
    idx = np.arange(1 << d.n)
    sup = idx & tmask == tmask
    best = math.inf
    where = None
    for q, T in enumerate(tables, start=1):
        vals = np.where(sup, T, INF)
        pos = int(np.argmin(vals))
        if vals[pos] < INF and vals[pos] < best:
            best = int(vals[pos])
            where = (q, pos)
    if where is None:
        return ExactResult(math.inf, None)
    if not reconstruct_solution:
        return ExactResult(best, None, *where)
    arcs = reconstruct(d, F, tables, where[1], where[0])
    return ExactResult(best, arcs, *where)


def reconstruct(d: Digraph, F: PathTables, tables: list, X: int, q: int) -> frozenset:
    """Recover one ear sequence achieving ``T_q[X]`` and return its arcs."""
    value = int(tables[q - 1][X])
    ears = []
    mask, level = X, q
    while level > 1:
        target = int(tables[level - 1][mask])
        prev = tables[level - 2]
        found = None
        sub = mask
        while found is None:
            inner = sub
            rest = mask ^ inner
            if prev[rest] < INF:
                ear_len = inner.bit_count() + 1
                if int(prev[rest]) + ear_len == target:
                    for s in range(1, d.n + 1):
                        if not (rest >> (s - 1)) & 1:
                            continue
                        for t in range(1, d.n + 1):
                            if (rest >> (t - 1)) & 1 and F.reach(s, t)[inner]:
                                found = (s, t, inner, rest)
                                break
                        if found:
                            break
            if sub == 0:
                break
            sub = (sub - 1) & mask
        if found is None:
            raise InternalInconsistency(f"no ear realizes T_{level}[{mask:b}]")
        s, t, inner, rest = found
        ears.append(F.path(s, t, inner))
        mask, level = rest, level - 1
    for a in range(1, d.n + 1):
        bit = 1 << (a - 1)
        if mask & bit and F.reach(a, a)[mask ^ bit]:
            ears.append(F.path(a, a, mask ^ bit))
            break
    else:
        raise InternalInconsistency(f"no cycle spans {mask:b}")
    arcs = set()
    total = 0
    for seq in ears:
        for u, v in zip(seq, seq[1:]):
            arcs.add(d.arc_index(u, v))
            total += 1
    if total != value or len(arcs) != value:
        raise InternalInconsistency(f"rebuilt {len(arcs)} distinct arcs for value {value}")
    if not terminals_mutually_reachable(d, arcs, d.terminals):
        raise InternalInconsistency("rebuilt arcs do not strongly connect the terminals")
    return frozenset(arcs)
