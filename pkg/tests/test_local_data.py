from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from clusterpoisson import local_data as ld

ID = ld.BirationalMap2D.identity()
SWAP = ld.BirationalMap2D.swap()


def same(f, g):
    return f.X == g.X and f.Y == g.Y


@pytest.mark.parametrize("b", [1, 2, Fraction(3, 2)])
def test_order5(b):
    f = ld.order5_map(b)
    assert ld.order_up_to(f, 10) == 5
    assert ld.is_identity(ld.iterate(f, 5))
    assert not any(ld.is_identity(ld.iterate(f, s)) for s in range(1, 5))


def test_order5_minus_sign_has_no_small_order():
    assert ld.order_up_to(ld.order5_map(1, -1), 30) == ld.NotFoundWithin(30)


@pytest.mark.parametrize("a,sign", [(1, 1), (1, -1), (7, 1), (Fraction(2, 3), -1)])
def test_order4(a, sign):
    f = ld.order4_map(a, sign)
    assert ld.order_up_to(f, 10) == 4
    assert ld.is_identity(ld.iterate(f, 4))
    assert not any(ld.is_identity(ld.iterate(f, s)) for s in range(1, 4))


def test_pq11_not_identity_within_12():
    assert ld.order_up_to(ld.pq11_map(1), 12) == ld.NotFoundWithin(12)
    assert ld.order_up_to(ld.pq11_map(1), 12, rng=random.Random(99)) == ld.NotFoundWithin(12)


def test_identity_and_swap():
    assert ld.order_up_to(ID, 3) == 1
    assert ld.is_identity(ld.compose(SWAP, SWAP))
    assert ld.order_up_to(SWAP, 5) == 2
    with pytest.raises(ValueError):
        ld.order_up_to(ID, 0)


def test_compose_with_identity():
    for f in (ld.order5_map(2), ld.pq11_map(3), ld.order4_map(5)):
        assert same(ld.compose(ID, f), f)
        assert same(ld.compose(f, ID), f)


def test_compose_matches_pointwise():
    f, g = ld.order5_map(2), ld.pq11_map(1)
    h = ld.compose(f, g)
    for pt in [(Fraction(3), Fraction(5, 7)), (Fraction(-2, 9), Fraction(4))]:
        assert h(*pt) == f(*g(*pt))


def test_degree_examples():
    d = ld.degree_growth(ld.order5_map(1), 10, reduce=True)
    assert d[:5] == [(2, 1), (2, 2), (2, 2), (1, 2), (1, 1)]
    assert d[5:] == d[:5]
    assert ld.degree_growth(ID, 4) == [(1, 1)] * 4
    assert ld.degree_growth(ID, 4, reduce=True) == [(1, 1)] * 4


def test_pq11_degrees_grow():
    raw = ld.degree_growth(ld.pq11_map(1), 8)
    assert raw == [(2, 1), (4, 2), (10, 4), (24, 10), (57, 24), (137, 57), (331, 137), (799, 331)]
    assert all(a < b for a, b in zip(raw, raw[1:]))
    red = ld.degree_growth(ld.pq11_map(1), 12, reduce=True)
    assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(red[1:], red[2:]))


def test_line_degrees_match_symbolic():
    for f in (ld.pq11_map(1), ld.order5_map(2)):
        assert ld.degree_growth(f, 4) == ld.degree_growth(f, 4, symbolic=True)
    with pytest.raises(ValueError):
        ld.degree_growth(ID, 2, reduce=True, symbolic=True)


def test_T_is_That_squared():
    for b in (1, 2, Fraction(1, 3)):
        D = ld.type_ii_data(b)
        F1 = ld.local_transform(D, 1, 1)
        That = ld.compose(SWAP, F1)
        # F_1 flips the sign of the bracket coefficient, so F_2 sees -1
        T = ld.compose(ld.local_transform(D, 2, -1), F1)
        assert same(T, ld.compose(That, That))
        assert same(That, ld.order5_map(b))


def test_psi_scaling():
    for w in range(-3, 4):
        for b in (1, 2, 5, Fraction(2, 3)):
            assert ld.scaled_psi(ld.lemma13_psi(w), b) == ld.type_ii_psi(w, b)


def test_local_transform_bad_index():
    with pytest.raises(ValueError):
        ld.local_transform(ld.type_ii_data(), 3, 1)


@given(st.integers(-20, 20).filter(bool), st.integers(1, 20), st.integers(-20, 20), st.integers(1, 20))
def test_order5_pointwise(p, q, r, s):
    f = ld.order5_map(2)
    pt = (Fraction(p, q), Fraction(r, s))
    try:
        cur = pt
        for _ in range(5):
            cur = f(*cur)
    except ZeroDivisionError:
        return
    assert cur == pt
