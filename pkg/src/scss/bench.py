"""Dense join kernel and the join-scaling benchmark.

The dense join works on full tables indexed by ``sum_p code_p * 17^p`` with
``uint64`` entries: every bit lane is an independent GF(2) table, so one call
joins 64 tables (for example 64 trials) with constant polynomial values.
It exists to measure how the per-bag join cost grows with the bag size; the
solver itself uses the sparse tables of :mod:`scss.cutcount`.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .algebra import popcounts
from .cutcount import NULL, ParityTable, pack, unpack

STATES = 17
_CHUNK_BYTES = 96 << 20


def dense_size(q: int) -> int:
    return STATES ** q


@lru_cache(maxsize=None)
def _group_index(q: int, a: int) -> np.ndarray:
    """Dense indices of all states with exactly ``a`` non-NULL positions, shaped
    ``(groups * 4^a cut configurations, 4^a degree configurations)``."""
    side = 4 ** a
    j = np.arange(side)
    blocks = []
    for active in combinations(range(q), a):
        base = sum(NULL * STATES ** p for p in range(q) if p not in active)
        deg = np.zeros(side, dtype=np.int64)
        cut = np.zeros(side, dtype=np.int64)
        for k, p in enumerate(active):
            two = (j >> (2 * k)) & 3
            deg += two * STATES ** p
            cut += 4 * two * STATES ** p
        blocks.append(base + cut[:, None] + deg[None, :])
    out = np.concatenate(blocks, axis=0)
    out.setflags(write=False)
    return out


def _ranked_convolve(left: np.ndarray, right: np.ndarray, u: int) -> np.ndarray:
    """GF(2) subset convolution along axis 0 (a ``u``-element universe) of
    ``(2^u, rows)`` arrays; rows are independent."""
    pc = popcounts(u)
    sel = pc[None, :, None] == np.arange(u + 1)[:, None, None]
    lr = np.ascontiguousarray(np.where(sel, left[None], np.uint64(0)))
    rr = np.ascontiguousarray(np.where(sel, right[None], np.uint64(0)))
    rows = left.shape[1]
    for arr in (lr, rr):
        for i in range(u):
            view = arr.reshape(u + 1, -1, 2, rows << i)
            view[:, :, 1, :] ^= view[:, :, 0, :]
    h = np.empty_like(lr)
    for k in range(u + 1):
        h[k] = np.bitwise_xor.reduce(lr[: k + 1] & rr[k::-1], axis=0)
    for i in range(u):
        view = h.reshape(u + 1, -1, 2, rows << i)
        view[:, :, 1, :] ^= view[:, :, 0, :]
    return h[pc.astype(np.intp), np.arange(1 << u)]


def dense_join(left: np.ndarray, right: np.ndarray, q: int) -> np.ndarray:
    """Join two dense tables over a bag of ``q`` vertices."""
    size = dense_size(q)
    if left.shape != (size,) or right.shape != (size,):
        raise ValueError(f"dense tables over {q} vertices need {size} entries")
    out = np.zeros(size, dtype=np.uint64)
    for a in range(q + 1):
        idx = _group_index(q, a)
        u = 2 * a
        per_row = (u + 1) * idx.shape[1] * 8 * 4
        step = max(1, _CHUNK_BYTES // per_row)
        for lo in range(0, idx.shape[0], step):
            block = np.ascontiguousarray(idx[lo: lo + step].T)
            out[block] = _ranked_convolve(left[block], right[block], u)
    return out


def to_dense(table: ParityTable, lane: int = 0) -> np.ndarray:
    """Constant-term parities of a sparse table placed in bit ``lane``."""
    q = len(table.bag)
    out = np.zeros(dense_size(q), dtype=np.uint64)
    for key, poly in table.entries.items():
        if poly & 1:
            pos = sum(c * STATES ** p for p, c in enumerate(unpack(key, q)))
            out[pos] |= np.uint64(1 << lane)
    return out


def from_dense(values: np.ndarray, bag: tuple, t: int, stride: int, lane: int = 0) -> ParityTable:
    q = len(bag)
    entries = {}
    for pos in np.flatnonzero((values >> np.uint64(lane)) & np.uint64(1)).tolist():
        codes = [(pos // STATES ** p) % STATES for p in range(q)]
        entries[pack(codes)] = 1
    return ParityTable(bag, t, stride, entries)


@dataclass
class ScalingReport:
    widths: tuple
    seconds: tuple  # per-join wall time for each width
    log_ratios: tuple  # ln(time[w+1] / time[w])
    low: float = 2.0
    high: float = 4.2

    @property
    def within(self) -> bool:
        return all(self.low <= r <= self.high for r in self.log_ratios)

    def lines(self) -> list:
        out = [f"width {w}: {s * 1e3:.3f} ms per join" for w, s in zip(self.widths, self.seconds)]
        for (w0, w1), r in zip(zip(self.widths, self.widths[1:]), self.log_ratios):
            out.append(f"ln ratio {w0}->{w1}: {r:.2f} (model ln 17 = {math.log(17):.2f})")
        verdict = "within" if self.within else "outside"
        out.append(f"all ratios {verdict} [{self.low}, {self.high}]")
        return out


def join_scaling(widths=(2, 3, 4, 5), seed: int = 0, min_seconds: float = 0.2) -> ScalingReport:
    """Time ``dense_join`` on random full tables for bags of ``width + 1`` vertices."""
    rng = np.random.default_rng(seed)
    seconds = []
    for w in widths:
        q = w + 1
        left = rng.integers(0, 2 ** 63, size=dense_size(q), dtype=np.uint64)
        right = rng.integers(0, 2 ** 63, size=dense_size(q), dtype=np.uint64)
        for a in range(q + 1):
            _group_index(q, a)
        runs, spent, best = 0, 0.0, math.inf
        while spent < min_seconds or runs < 3:
            start = time.perf_counter()
            dense_join(left, right, q)
            took = time.perf_counter() - start
            best = min(best, took)
            spent += took
            runs += 1
            if took > min_seconds:
                break
        seconds.append(best)
    ratios = tuple(math.log(b / a) for a, b in zip(seconds, seconds[1:]))
    return ScalingReport(tuple(widths), tuple(seconds), ratios)
