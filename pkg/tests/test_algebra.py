import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scss.algebra import (INF, clmul, minplus_subset_convolution, moebius_gf2,
                          naive_minplus_subset_convolution, naive_subset_convolution_gf2,
                          naive_zeta_gf2, poly_subset_convolution_gf2,
                          subset_convolution_gf2, zeta_gf2)
from scss.errors import UniverseMismatch, ValueBoundExceeded


def _bits(rng, u):
    return rng.integers(0, 2, size=1 << u, dtype=np.uint8)


def test_zeta_of_empty_indicator_is_all_ones():
    f = np.zeros(1 << 5, dtype=np.uint8)
    f[0] = 1
    assert (zeta_gf2(f) == 1).all()


def test_zeta_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(100):
        f = _bits(rng, 10)
        assert np.array_equal(moebius_gf2(zeta_gf2(f)), f)


def test_zeta_matches_naive():
    rng = np.random.default_rng(1)
    for u in range(0, 9):
        f = _bits(rng, u)
        assert np.array_equal(zeta_gf2(f), naive_zeta_gf2(f))


def test_convolution_identity_and_singletons():
    rng = np.random.default_rng(2)
    f = _bits(rng, 6)
    e = np.zeros(1 << 6, dtype=np.uint8)
    e[0] = 1
    assert np.array_equal(subset_convolution_gf2(f, e), f)
    single = np.array([0, 1, 1, 0], dtype=np.uint8)
    assert subset_convolution_gf2(single, single)[3] == 0


def test_convolution_rejects_mismatched_universes():
    with pytest.raises(UniverseMismatch):
        subset_convolution_gf2(np.zeros(4, np.uint8), np.zeros(8, np.uint8))
    with pytest.raises(UniverseMismatch):
        subset_convolution_gf2(np.zeros(3, np.uint8), np.zeros(3, np.uint8))


def test_gf2_convolution_matches_naive():
    rng = np.random.default_rng(3)
    for trial in range(100):
        u = int(rng.integers(0, 11))
        f, g = _bits(rng, u), _bits(rng, u)
        assert np.array_equal(subset_convolution_gf2(f, g), naive_subset_convolution_gf2(f, g))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 2 ** 32 - 1))
def test_gf2_convolution_commutative_and_associative(u, seed):
    rng = np.random.default_rng(seed)
    f, g, h = _bits(rng, u), _bits(rng, u), _bits(rng, u)
    assert np.array_equal(subset_convolution_gf2(f, g), subset_convolution_gf2(g, f))
    left = subset_convolution_gf2(subset_convolution_gf2(f, g), h)
    right = subset_convolution_gf2(f, subset_convolution_gf2(g, h))
    assert np.array_equal(left, right)


def _minplus_table(rng, u, top=20, p_inf=0.3):
    vals = rng.integers(0, top + 1, size=1 << u).astype(np.int64)
    vals[rng.random(1 << u) < p_inf] = INF
    return vals


def test_minplus_identity_and_infinity():
    rng = np.random.default_rng(4)
    f = _minplus_table(rng, 6)
    e = np.full(1 << 6, INF, dtype=np.int64)
    e[0] = 0
    assert np.array_equal(minplus_subset_convolution(f, e, 20), f)
    inf = np.full(1 << 6, INF, dtype=np.int64)
    assert (minplus_subset_convolution(inf, inf, 20) == INF).all()


def test_minplus_matches_naive():
    rng = np.random.default_rng(5)
    for _ in range(100):
        u = int(rng.integers(0, 9))
        f, g = _minplus_table(rng, u), _minplus_table(rng, u)
        assert np.array_equal(minplus_subset_convolution(f, g, 20),
                              naive_minplus_subset_convolution(f, g))


def test_minplus_bound_is_enforced():
    f = np.array([0, 5], dtype=np.int64)
    with pytest.raises(ValueBoundExceeded):
        minplus_subset_convolution(f, f, 4)
    with pytest.raises(ValueBoundExceeded):
        minplus_subset_convolution(np.array([-1, 0], dtype=np.int64), f, 10)


def _naive_clmul(a, b):
    r = 0
    i = 0
    while a >> i:
        if (a >> i) & 1:
            r ^= b << i
        i += 1
    return r


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 300), st.integers(0, 2 ** 300))
def test_clmul_matches_shift_and_xor(a, b):
    assert clmul(a, b) == _naive_clmul(a, b)


def test_clmul_dense_path():
    rng = np.random.default_rng(6)
    a = int.from_bytes(rng.bytes(200), "little")
    b = int.from_bytes(rng.bytes(150), "little")
    assert clmul(a, b) == _naive_clmul(a, b)
    assert clmul(a, b, (1 << 100) - 1) == _naive_clmul(a, b) & ((1 << 100) - 1)


def test_poly_convolution_reduces_to_gf2_on_constants():
    rng = np.random.default_rng(7)
    for u in range(0, 7):
        f, g = _bits(rng, u), _bits(rng, u)
        h = poly_subset_convolution_gf2([int(x) for x in f], [int(x) for x in g])
        assert h == [int(x) for x in naive_subset_convolution_gf2(f, g)]


def test_poly_convolution_matches_naive_polynomials():
    rng = np.random.default_rng(8)
    u = 4
    f = [int(x) for x in rng.integers(0, 256, size=1 << u)]
    g = [int(x) for x in rng.integers(0, 256, size=1 << u)]
    expect = [0] * (1 << u)
    for s in range(1 << u):
        a = s
        while True:
            expect[s] ^= _naive_clmul(f[a], g[s ^ a])
            if a == 0:
                break
            a = (a - 1) & s
    assert poly_subset_convolution_gf2(f, g) == expect
