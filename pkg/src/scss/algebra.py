"""Transforms and convolutions on the subset lattice.

Set functions are dense numpy tables indexed by bitmask. GF(2) tables are
``uint8`` arrays of 0/1; (min,+) tables are ``int64`` arrays in which
``INF`` marks +infinity.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import UniverseMismatch, UniverseTooLarge, ValueBoundExceeded

MAX_UNIVERSE = 25
INF = np.int64(1 << 40)
_PRIME = (1 << 31) - 1


def universe_size(table) -> int:
    size = len(table)
    u = size.bit_length() - 1
    if size <= 0 or 1 << u != size:
        raise UniverseMismatch(f"table length {size} is not a power of two")
    if u > MAX_UNIVERSE:
        raise UniverseTooLarge(f"universe of {u} elements exceeds the cap of {MAX_UNIVERSE}")
    return u


@lru_cache(maxsize=None)
def popcounts(u: int) -> np.ndarray:
    pc = np.zeros(1 << u, dtype=np.int8)
    for i in range(u):
        pc[1 << i: 1 << (i + 1)] = pc[: 1 << i] + 1
    pc.setflags(write=False)
    return pc


def _xor_zeta_inplace(a: np.ndarray, u: int) -> np.ndarray:
    # Works on the last axis; mod 2 the zeta and Moebius transforms coincide.
    lead = a.shape[:-1]
    for i in range(u):
        view = a.reshape(*lead, -1, 2, 1 << i)
        view[..., 1, :] ^= view[..., 0, :]
    return a


def zeta_gf2(f) -> np.ndarray:
    """``fhat[X] = sum_{Y subset X} f[Y] mod 2``."""
    f = np.asarray(f, dtype=np.uint8)
    u = universe_size(f)
    return _xor_zeta_inplace(f.copy() & 1, u)


def moebius_gf2(fhat) -> np.ndarray:
    return zeta_gf2(fhat)


def subset_convolution_gf2(f, g) -> np.ndarray:
    """``h[S] = sum_{S = A disjoint-union B} f[A] g[B] mod 2`` by ranked transforms."""
    f = np.asarray(f, dtype=np.uint8) & 1
    g = np.asarray(g, dtype=np.uint8) & 1
    if f.shape != g.shape:
        raise UniverseMismatch(f"tables of length {len(f)} and {len(g)}")
    u = universe_size(f)
    pc = popcounts(u)
    ranks = np.arange(u + 1)[:, None]
    fr = _xor_zeta_inplace(np.where(pc[None, :] == ranks, f[None, :], 0).astype(np.uint8), u)
    gr = _xor_zeta_inplace(np.where(pc[None, :] == ranks, g[None, :], 0).astype(np.uint8), u)
    hr = np.zeros_like(fr)
    for k in range(u + 1):
        for j in range(k + 1):
            hr[k] ^= fr[j] & gr[k - j]
    _xor_zeta_inplace(hr, u)
    return hr[pc, np.arange(1 << u)]


def naive_subset_convolution_gf2(f, g) -> np.ndarray:
    f = np.asarray(f, dtype=np.uint8) & 1
    g = np.asarray(g, dtype=np.uint8) & 1
    if f.shape != g.shape:
        raise UniverseMismatch(f"tables of length {len(f)} and {len(g)}")
    size = len(f)
    h = np.zeros(size, dtype=np.uint8)
    for s in range(size):
        acc = 0
        a = s
        while True:
            acc ^= int(f[a]) & int(g[s ^ a])
            if a == 0:
                break
            a = (a - 1) & s
        h[s] = acc
    return h


def naive_zeta_gf2(f) -> np.ndarray:
    f = np.asarray(f, dtype=np.uint8) & 1
    out = np.zeros_like(f)
    for x in range(len(f)):
        out[x] = sum(int(f[y]) for y in range(x + 1) if y & x == y) & 1
    return out


# -- (min,+) ------------------------------------------------------------------

def _ranked_zeta_counts(indicator: np.ndarray, u: int, pc: np.ndarray) -> dict:
    """Ranked zeta transform of a 0/1 table: ``{k: sum over Y subset X, |Y| = k}``
    for every rank ``k`` that actually occurs."""
    out = {}
    for k in np.unique(pc[indicator.astype(bool)]):
        a = np.where(pc == k, indicator, 0).astype(np.int64)
        for i in range(u):
            view = a.reshape(-1, 2, 1 << i)
            view[:, 1, :] += view[:, 0, :]
        out[int(k)] = a
    return out


def _moebius_mod(a: np.ndarray, u: int) -> np.ndarray:
    lead = a.shape[:-1]
    for i in range(u):
        view = a.reshape(*lead, -1, 2, 1 << i)
        view[..., 1, :] -= view[..., 0, :]
        view[..., 1, :] %= _PRIME
    return a


def _finite_values(f: np.ndarray, M: int, name: str) -> np.ndarray:
    finite = f < INF
    if finite.any():
        if f[finite].min() < 0:
            raise ValueBoundExceeded(f"{name} has a negative value")
        if f[finite].max() > M:
            raise ValueBoundExceeded(f"{name} has a finite value above the bound {M}")
    return finite


def minplus_subset_convolution(f, g, M: int) -> np.ndarray:
    """``h[S] = min over S = A disjoint-union B of f[A] + g[B]`` (``INF`` if no split).

    Level-wise counting: for every pair of value levels ``(a, b)`` the ranked
    zeta transforms of the indicators ``[f == a]`` and ``[g == b]`` are
    multiplied and accumulated into level ``a + b``; after inverting, ``h[S]``
    is the smallest level whose count of splits of ``S`` is positive.
    Counts are kept modulo a prime larger than ``2^u``, so they are exact.
    """
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    if f.shape != g.shape:
        raise UniverseMismatch(f"tables of length {len(f)} and {len(g)}")
    u = universe_size(f)
    ff = _finite_values(f, M, "f")
    gf = _finite_values(g, M, "g")
    pc = popcounts(u)
    fz = {a: _ranked_zeta_counts((f == a).astype(np.int64), u, pc)
          for a in np.unique(f[ff]).tolist()}
    gz = {b: _ranked_zeta_counts((g == b).astype(np.int64), u, pc)
          for b in np.unique(g[gf]).tolist()}
    levels = {}
    for a, fa in fz.items():
        for b, gb in gz.items():
            acc = levels.get(a + b)
            if acc is None:
                acc = levels[a + b] = np.zeros((u + 1, 1 << u), dtype=np.int64)
            for k, x in fa.items():
                for j, y in gb.items():
                    if k + j <= u:
                        acc[k + j] += x * y
                        acc[k + j] %= _PRIME
    h = np.full(1 << u, INF, dtype=np.int64)
    idx = np.arange(1 << u)
    open_ = np.ones(1 << u, dtype=bool)
    for c in sorted(levels):
        counts = _moebius_mod(levels[c], u)[pc, idx]
        hit = open_ & (counts != 0)
        h[hit] = c
        open_ &= ~hit
        if not open_.any():
            break
    return h


def naive_minplus_subset_convolution(f, g) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    if f.shape != g.shape:
        raise UniverseMismatch(f"tables of length {len(f)} and {len(g)}")
    size = len(f)
    h = np.full(size, INF, dtype=np.int64)
    for s in range(size):
        best = INF
        a = s
        while True:
            fa, gb = f[a], g[s ^ a]
            if fa < INF and gb < INF and fa + gb < best:
                best = fa + gb
            if a == 0:
                break
            a = (a - 1) & s
        h[s] = best
    return h


# -- GF(2) polynomials packed into Python ints --------------------------------

_SPARSE_LIMIT = 48


def clmul(a: int, b: int, mask: int = -1) -> int:
    """Carry-less product of two GF(2) polynomials stored as bit-packed ints."""
    if not a or not b:
        return 0
    ca, cb = a.bit_count(), b.bit_count()
    if cb < ca:
        a, b, ca, cb = b, a, cb, ca
    if ca <= _SPARSE_LIMIT:
        r = 0
        while a:
            low = a & -a
            r ^= b << (low.bit_length() - 1)
            a ^= low
        return r & mask
    return _clmul_dense(a, b, ca) & mask


def _clmul_dense(a: int, b: int, count: int) -> int:
    # Spread each bit into its own lane, multiply as integers, keep lane parities.
    dtype = np.uint16 if count < (1 << 16) else np.uint32
    width = np.dtype(dtype).itemsize

    def spread(x):
        raw = np.frombuffer(x.to_bytes((x.bit_length() + 7) // 8, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little").astype(dtype)
        return int.from_bytes(bits.tobytes(), "little")

    prod = spread(a) * spread(b)
    nbytes = (prod.bit_length() + 8 * width - 1) // (8 * width) * width
    lanes = np.frombuffer(prod.to_bytes(nbytes, "little"), dtype=dtype) & 1
    packed = np.packbits(lanes.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def poly_subset_convolution_gf2(f: list, g: list, mask: int = -1) -> list:
    """Ranked GF(2) subset convolution whose entries are bit-packed GF(2)
    polynomials (Python ints); products are carry-less and truncated by ``mask``."""
    size = len(f)
    if len(g) != size:
        raise UniverseMismatch(f"tables of length {len(f)} and {len(g)}")
    u = universe_size(f)
    pc = popcounts(u).tolist()

    def ranked(table):
        out = {}
        for x, val in enumerate(table):
            if val:
                row = out.get(pc[x])
                if row is None:
                    row = out[pc[x]] = [0] * size
                row[x] = val
        for row in out.values():
            for i in range(u):
                bit = 1 << i
                for x in range(size):
                    if x & bit:
                        row[x] ^= row[x ^ bit]
        return out

    fr, gr = ranked(f), ranked(g)
    h = [0] * size
    for k in range(u + 1):
        row = [0] * size
        any_term = False
        for j, fj in fr.items():
            gj = gr.get(k - j)
            if gj is None:
                continue
            any_term = True
            for x in range(size):
                if fj[x] and gj[x]:
                    row[x] ^= clmul(fj[x], gj[x], mask)
        if not any_term:
            continue
        for i in range(u):
            bit = 1 << i
            for x in range(size):
                if x & bit:
                    row[x] ^= row[x ^ bit]
        for x in range(size):
            if pc[x] == k:
                h[x] = row[x]
    return h
