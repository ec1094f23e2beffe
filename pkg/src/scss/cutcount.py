"""Randomized Cut&Count decision procedure for SCSS on a nice tree decomposition.

A partial solution is a pair (relaxed in-branching, relaxed out-branching)
rooted at the smallest terminal ``r`` and spanning the same vertices, each
with a consistent cut that keeps ``r`` on side 0. Per bag vertex the state is
either NULL (vertex unused) or four bits::

    bit 0  s_I    in-degree of the vertex in the out-branching
    bit 1  s_O    out-degree of the vertex in the in-branching
    bit 2  s_Vin  side of the vertex in the in-branching cut
    bit 3  s_Vout side of the vertex in the out-branching cut

NULL is code 16, giving 17 states per vertex. A bag state packs one 5-bit
code per bag position (bags are sorted tuples). The value stored for a state
is a GF(2) polynomial in (arc count i, weight w), bit-packed into a Python
int at bit ``i * stride + w`` with ``stride = 2tN + 1``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import clmul, poly_subset_convolution_gf2
from .errors import BagMismatch, WidthTooLarge
from .graph import Digraph
from .treedecomp import (FORGET, INTRODUCE_ARC, INTRODUCE_VERTEX, JOIN, LEAF,
                         NiceTreeDecomposition)

NULL = 16
I_BIT, O_BIT, VIN_BIT, VOUT_BIT = 1, 2, 4, 8
DEG_BITS = I_BIT | O_BIT
DEFAULT_WIDTH_CAP = 7

# Table 1: (s_I, s_O) pairs combine iff their set bits are disjoint.
DEGREE_TABLE = {
    (a, b): (None if a & b else a | b)
    for a in range(4) for b in range(4)
}


def all_codes():
    """The 17 per-vertex states: NULL plus every 4-bit tuple."""
    return [NULL] + list(range(16))


def decode(code):
    if code == NULL:
        return None
    return (code & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1)


def encode(state):
    if state is None:
        return NULL
    s_i, s_o, s_vin, s_vout = state
    return s_i | (s_o << 1) | (s_vin << 2) | (s_vout << 3)


def pack(codes) -> int:
    key = 0
    for p, c in enumerate(codes):
        key |= c << (5 * p)
    return key


def unpack(key: int, q: int) -> list:
    return [(key >> (5 * p)) & 31 for p in range(q)]


@dataclass(frozen=True)
class WeightAssignment:
    """``w_in[a]`` / ``w_out[a]`` are the weights of arc index ``a`` paired with
    the in-branching and out-branching symbols."""

    N: int
    w_in: tuple
    w_out: tuple

    def __post_init__(self):
        for w in self.w_in + self.w_out:
            if not 1 <= w <= self.N:
                raise ValueError(f"weight {w} outside 1..{self.N}")


def default_N(d: Digraph) -> int:
    return max(1, 4 * d.m)


def sample_weights(d: Digraph, N: Optional[int] = None, seed=None) -> WeightAssignment:
    N = default_N(d) if N is None else int(N)
    if N < 1:
        raise ValueError("N must be positive")
    rng = np.random.default_rng(seed)
    w = rng.integers(1, N + 1, size=(d.m, 2))
    return WeightAssignment(N, tuple(int(x) for x in w[:, 0]), tuple(int(x) for x in w[:, 1]))


@dataclass
class ParityTable:
    """Sparse DP table of one bag: ``entries[packed_state]`` is a polynomial."""

    bag: tuple
    t: int
    stride: int
    entries: dict = field(default_factory=dict)

    @property
    def mask(self):
        return (1 << ((self.t + 1) * self.stride)) - 1

    def get(self, i, w, state) -> int:
        key = pack([encode(s) for s in state])
        return (self.entries.get(key, 0) >> (i * self.stride + w)) & 1

    def items(self):
        """Yield ``(i, w, state)`` for every entry with parity 1."""
        q = len(self.bag)
        for key, poly in self.entries.items():
            state = tuple(decode(c) for c in unpack(key, q))
            while poly:
                low = poly & -poly
                pos = low.bit_length() - 1
                yield pos // self.stride, pos % self.stride, state
                poly ^= low

    def __len__(self):
        return len(self.entries)


def _xor_into(table: dict, key: int, poly: int):
    cur = table.get(key, 0) ^ poly
    if cur:
        table[key] = cur
    else:
        table.pop(key, None)


class _Context:
    def __init__(self, d: Digraph, weights: WeightAssignment):
        self.d = d
        self.root = d.terminals[0]
        self.terminals = set(d.terminals)
        self.t = d.budget
        self.stride = 2 * d.budget * weights.N + 1
        self.mask = (1 << ((self.t + 1) * self.stride)) - 1
        self.weights = weights


def leaf_table(ctx) -> ParityTable:
    return ParityTable((), ctx.t, ctx.stride, {0: 1})


def introduce_vertex(ctx, child: ParityTable, v: int) -> ParityTable:
    bag = tuple(sorted(child.bag + (v,)))
    p = bag.index(v)
    if v == ctx.root:
        codes = [0]
    else:
        codes = [0, VIN_BIT, VOUT_BIT, VIN_BIT | VOUT_BIT]
        if v not in ctx.terminals:
            codes.append(NULL)
    low_mask = (1 << (5 * p)) - 1
    out = {}
    for key, poly in child.entries.items():
        base = (key & low_mask) | ((key >> (5 * p)) << (5 * p + 5))
        for c in codes:
            out[base | (c << (5 * p))] = poly
    return ParityTable(bag, ctx.t, ctx.stride, out)


def forget_vertex(ctx, child: ParityTable, v: int) -> ParityTable:
    p = child.bag.index(v)
    bag = child.bag[:p] + child.bag[p + 1:]
    if v == ctx.root:
        allowed = {0, VIN_BIT, VOUT_BIT, VIN_BIT | VOUT_BIT}
    else:
        allowed = {c | DEG_BITS for c in (0, VIN_BIT, VOUT_BIT, VIN_BIT | VOUT_BIT)}
        if v not in ctx.terminals:
            allowed.add(NULL)
    low_mask = (1 << (5 * p)) - 1
    out = {}
    for key, poly in child.entries.items():
        if (key >> (5 * p)) & 31 in allowed:
            _xor_into(out, (key & low_mask) | ((key >> (5 * p + 5)) << (5 * p)), poly)
    return ParityTable(bag, ctx.t, ctx.stride, out)


def introduce_arc(ctx, child: ParityTable, arc: tuple) -> ParityTable:
    u, v = arc
    idx = ctx.d.arc_index(u, v)
    w_in, w_out = ctx.weights.w_in[idx], ctx.weights.w_out[idx]
    su, sv = 5 * child.bag.index(u), 5 * child.bag.index(v)
    shift_in = ctx.stride + w_in
    shift_out = ctx.stride + w_out
    shift_both = ctx.stride + w_in + w_out
    in_allowed = u != ctx.root   # the root has out-degree 0 in the in-branching
    out_allowed = v != ctx.root  # and in-degree 0 in the out-branching
    mask = ctx.mask
    out = {}
    for key, poly in child.entries.items():
        _xor_into(out, key, poly)
        cu, cv = (key >> su) & 31, (key >> sv) & 31
        if cu == NULL or cv == NULL:
            continue
        can_in = in_allowed and not cu & O_BIT and (cu & VIN_BIT) == (cv & VIN_BIT)
        can_out = out_allowed and not cv & I_BIT and (cu & VOUT_BIT) == (cv & VOUT_BIT)
        if can_in:
            p = (poly << shift_in) & mask
            if p:
                _xor_into(out, key | (O_BIT << su), p)
        if can_out:
            p = (poly << shift_out) & mask
            if p:
                _xor_into(out, key | (I_BIT << sv), p)
        if can_in and can_out:
            p = (poly << shift_both) & mask
            if p:
                _xor_into(out, key | (O_BIT << su) | (I_BIT << sv), p)
    return ParityTable(child.bag, ctx.t, ctx.stride, out)


# -- join ---------------------------------------------------------------------

def _deg_mask(q):
    return sum(DEG_BITS << (5 * p) for p in range(q))


def _group(table: ParityTable) -> dict:
    """Split a table by (active set, cut bits); inside a group each state is
    identified by the subset of (active vertex, symbol) degree bits it sets."""
    q = len(table.bag)
    dmask = _deg_mask(q)
    groups = {}
    for key, poly in table.entries.items():
        shape = key & ~dmask
        idx = 0
        j = 0
        for p in range(q):
            c = (key >> (5 * p)) & 31
            if c != NULL:
                idx |= (c & DEG_BITS) << (2 * j)
                j += 1
        groups.setdefault(shape, {})[idx] = poly
    return groups


def _active_positions(shape: int, q: int) -> list:
    return [p for p in range(q) if (shape >> (5 * p)) & 31 != NULL]


def _expand(shape: int, idx: int, active: list) -> int:
    key = shape
    for j, p in enumerate(active):
        key |= ((idx >> (2 * j)) & DEG_BITS) << (5 * p)
    return key


def _convolution_cost(nl, nr, universe):
    size = 1 << universe
    return size * (universe + 1) * (universe + 2) // 2


def join_tables(left: ParityTable, right: ParityTable, method: str = "convolution") -> ParityTable:
    """Combine the tables of two children with identical bags.

    ``method`` selects how each (active set, cut bits) group is combined:
    ``"convolution"`` runs a ranked GF(2) subset convolution over
    ``active x {I, O}``, ``"pairwise"`` enumerates pairs with disjoint degree
    bits, and ``"auto"`` picks the cheaper per group. All three are exact.
    """
    if left.bag != right.bag or left.t != right.t or left.stride != right.stride:
        raise BagMismatch(f"cannot join bags {left.bag} and {right.bag}")
    q = len(left.bag)
    mask = left.mask
    lg, rg = _group(left), _group(right)
    out = {}
    for shape, fl in lg.items():
        fr = rg.get(shape)
        if fr is None:
            continue
        active = _active_positions(shape, q)
        universe = 2 * len(active)
        use_conv = method == "convolution" or (
            method == "auto" and _convolution_cost(len(fl), len(fr), universe) < len(fl) * len(fr))
        if use_conv:
            size = 1 << universe
            f = [0] * size
            g = [0] * size
            for idx, poly in fl.items():
                f[idx] = poly
            for idx, poly in fr.items():
                g[idx] = poly
            h = poly_subset_convolution_gf2(f, g, mask)
            for idx, poly in enumerate(h):
                if poly:
                    out[_expand(shape, idx, active)] = poly
        elif method in ("pairwise", "auto"):
            h = {}
            for a, pa in fl.items():
                for b, pb in fr.items():
                    if not a & b:
                        _xor_into(h, a | b, clmul(pa, pb, mask))
            for idx, poly in h.items():
                out[_expand(shape, idx, active)] = poly
        else:
            raise ValueError(f"unknown join method {method!r}")
    return ParityTable(left.bag, left.t, left.stride, out)


def combine_states(s1, s2):
    """Per-vertex combination rule of two child states, or None if they do not combine."""
    if s1 is None or s2 is None:
        return None if s1 is not s2 else ("null",)
    if s1[2:] != s2[2:]:
        return None
    deg = DEGREE_TABLE[(s1[0] | (s1[1] << 1), s2[0] | (s2[1] << 1))]
    if deg is None:
        return None
    return (deg & 1, deg >> 1) + tuple(s1[2:])


def naive_join(left: ParityTable, right: ParityTable) -> ParityTable:
    """Reference join straight from the definition: all state pairs, all
    (i, w) splits, per-vertex combination through the degree table."""
    if left.bag != right.bag:
        raise BagMismatch(f"cannot join bags {left.bag} and {right.bag}")
    t, stride = left.t, left.stride
    acc = {}
    lterms = list(left.items())
    rterms = list(right.items())
    for i1, w1, s1 in lterms:
        for i2, w2, s2 in rterms:
            if i1 + i2 > t or w1 + w2 >= stride:
                continue
            merged = []
            for a, b in zip(s1, s2):
                c = combine_states(a, b)
                if c is None:
                    break
                merged.append(None if c == ("null",) else c)
            else:
                k = (i1 + i2, w1 + w2, tuple(merged))
                acc[k] = acc.get(k, 0) ^ 1
    out = {}
    for (i, w, state), bit in acc.items():
        if bit:
            key = pack([encode(s) for s in state])
            out[key] = out.get(key, 0) ^ (1 << (i * stride + w))
    return ParityTable(left.bag, t, stride, {k: v for k, v in out.items() if v})


# -- driver -------------------------------------------------------------------

def run_dp(ntd: NiceTreeDecomposition, d: Digraph, weights: WeightAssignment,
           width_cap: int = DEFAULT_WIDTH_CAP, join_method: str = "auto") -> ParityTable:
    """Evaluate the parity DP bottom-up; returns the root table (empty bag)."""
    if not d.terminals:
        raise ValueError("the DP needs at least one terminal to root the branchings")
    if ntd.width > width_cap:
        raise WidthTooLarge(f"decomposition width {ntd.width} exceeds cap {width_cap}")
    ctx = _Context(d, weights)
    tables = [None] * len(ntd.nodes)
    pending = [0] * len(ntd.nodes)
    for node in ntd.nodes:
        for c in node.children:
            pending[c] += 1
    for i, node in enumerate(ntd.nodes):
        kids = [tables[c] for c in node.children]
        if node.kind == LEAF:
            tab = leaf_table(ctx)
        elif node.kind == INTRODUCE_VERTEX:
            tab = introduce_vertex(ctx, kids[0], node.vertex)
        elif node.kind == FORGET:
            tab = forget_vertex(ctx, kids[0], node.vertex)
        elif node.kind == INTRODUCE_ARC:
            tab = introduce_arc(ctx, kids[0], node.arc)
        elif node.kind == JOIN:
            tab = join_tables(kids[0], kids[1], join_method)
        else:
            raise ValueError(f"unknown node kind {node.kind}")
        for c in node.children:
            tables[c] = None
        tables[i] = tab
    return tables[ntd.root]


def root_parities(root: ParityTable) -> dict:
    """``{(i, W): 1}`` for every odd root entry."""
    return {(i, w): 1 for i, w, _ in root.items()}


def weight_parities(root: ParityTable) -> int:
    """Bitmask over W of the parity summed over all arc counts ``i <= t``."""
    poly = root.entries.get(0, 0)
    wmask = (1 << root.stride) - 1
    folded = 0
    for i in range(root.t + 1):
        folded ^= (poly >> (i * root.stride)) & wmask
    return folded


@dataclass
class CutCountVerdict:
    verdict: str
    trials: int
    seeds: list
    witness: Optional[tuple] = None  # (i, W) of the successful trial
    elapsed_ms: float = 0.0
    decided_without_trials: bool = False

    @property
    def error_bound(self):
        if self.verdict == "yes" or self.decided_without_trials:
            return 0.0
        return 2.0 ** -self.trials


def trial_seeds(seed, trials):
    rng = np.random.default_rng(seed)
    return [int(x) for x in rng.integers(0, 2 ** 63 - 1, size=trials)]


def decide(d: Digraph, ntd: NiceTreeDecomposition, trials: int = 30, seed=0,
           N: Optional[int] = None, width_cap: int = DEFAULT_WIDTH_CAP,
           join_method: str = "auto") -> CutCountVerdict:
    """Monte Carlo decision: YES answers are always correct, a YES instance is
    missed with probability at most ``2^-trials`` at the default ``N``."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    seeds = trial_seeds(seed, trials)
    if len(d.terminals) <= 1:
        return CutCountVerdict("yes", 0, [], None, (time.perf_counter() - start) * 1e3, True)
    if d.budget == 0:
        return CutCountVerdict("no", 0, [], None, (time.perf_counter() - start) * 1e3, True)
    for k, s in enumerate(seeds, start=1):
        weights = sample_weights(d, N, s)
        root = run_dp(ntd, d, weights, width_cap, join_method)
        folded = weight_parities(root) >> 1  # W ranges over 1..2tN
        if folded:
            w = (folded & -folded).bit_length()
            poly = root.entries[0]
            i = next(i for i in range(root.t + 1) if (poly >> (i * root.stride + w)) & 1)
            return CutCountVerdict("yes", k, seeds[:k], (i, w), (time.perf_counter() - start) * 1e3)
    return CutCountVerdict("no", trials, seeds, None, (time.perf_counter() - start) * 1e3)
