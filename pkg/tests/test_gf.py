from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpbrace.errors import DivisionByZero, EvenCharacteristic, NotASquare, NotPrime, ReducibleModulus, SpecMismatch, ZeroInput
from fpbrace.gf import GF, SquareClass, find_irreducible, find_nonsquare, inv, is_irreducible, is_square, sqrt

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)]


def test_find_irreducible_examples():
    assert find_irreducible(3, 1) == (0, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)
    # x^2 + 2 is the first irreducible in scan order over F_5 (2 is a nonsquare)
    assert find_irreducible(5, 2) == (2, 0, 1)


def test_find_irreducible_is_first_in_scan_order():
    # every candidate before the chosen one (constant term least significant) is reducible
    for p, k in [(3, 2), (3, 3), (5, 2), (7, 2)]:
        chosen = find_irreducible(p, k)
        value = sum(c * p**i for i, c in enumerate(chosen[:-1]))
        for v in range(value):
            coeffs = [(v // p**i) % p for i in range(k)] + [1]
            assert not is_irreducible(coeffs, p)
        assert is_irreducible(chosen, p)


def test_bad_characteristic():
    with pytest.raises(EvenCharacteristic):
        find_irreducible(2, 4)
    with pytest.raises(EvenCharacteristic):
        GF(2)
    with pytest.raises(NotPrime):
        GF(9)
    with pytest.raises(ReducibleModulus):
        GF(3, 2, (2, 0, 1))  # x^2 + 2 = (x + 1)(x + 2)


def test_arithmetic_examples():
    F3 = GF(3)
    assert F3(2) * F3(2) == F3(1)
    F9 = GF(3, 2)
    x = F9([0, 1])
    assert x * x == F9(2)
    F5 = GF(5)
    assert inv(F5(3)) == F5(2)
    assert F5(3).inverse() == 2


def test_division_by_zero():
    F = GF(5)
    with pytest.raises(DivisionByZero):
        inv(F.zero)
    with pytest.raises(ZeroDivisionError):
        F(1) / F(0)


def test_spec_mismatch():
    with pytest.raises(SpecMismatch):
        GF(3)(1) + GF(5)(1)


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    F = GF(p, k)
    els = list(F.elements())
    assert len(els) == F.q
    for a in els:
        assert a ** F.q == a
        if a.value:
            assert a * a.inverse() == F.one


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_vectorized_ops_match_scalar(p, k):
    F = GF(p, k)
    A = np.arange(F.q)
    M = F.mul(A[:, None], A[None, :])
    S = F.add(A[:, None], A[None, :])
    for a in range(F.q):
        for b in range(F.q):
            assert M[a, b] == (F(F.decode(a)) * F(F.decode(b))).value
            assert S[a, b] == (F(F.decode(a)) + F(F.decode(b))).value


def test_is_square_examples():
    assert is_square(GF(3)(2)) is SquareClass.NONSQUARE
    assert is_square(GF(3, 2)(2)) is SquareClass.SQUARE
    for p, k in SMALL_FIELDS:
        assert is_square(GF(p, k).one) is SquareClass.SQUARE
    with pytest.raises(ZeroInput):
        is_square(GF(5).zero)


def test_find_nonsquare_examples():
    assert find_nonsquare(GF(3)) == 2
    assert find_nonsquare(GF(5)) == 2
    F9 = GF(3, 2, (1, 0, 1))
    assert find_nonsquare(F9).coeffs == (1, 1)


def test_sqrt_examples():
    F5 = GF(5)
    assert sqrt(F5(4)) == 2
    assert sqrt(F5(1)) == 1
    with pytest.raises(NotASquare):
        sqrt(GF(3)(2))
    with pytest.raises(ZeroInput):
        sqrt(F5.zero)


def test_element_order_and_repr():
    F9 = GF(3, 2)
    els = list(F9.elements())
    assert els == sorted(els)
    assert els[1].coeffs == (1, 0) and els[3].coeffs == (0, 1)
    assert str(F9([2, 1])) == "x + 2"


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_ring_laws(pk, i, j, l):
    F = GF(*pk)
    a, b, c = (F(F.decode(v % F.q)) for v in (i, j, l))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - b + b == a
    assert -(-a) == a
