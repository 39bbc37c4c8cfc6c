"""Tests for exact field arithmetic."""

import sys
import os
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import primerange

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.picardcusps.arithmetic.quadfield import (
    SplittingType,
    elements_up_to_norm,
    field_from_disc,
    fundamental_discriminants,
    make_field,
    prime_above,
    splitting_type,
    squarefree_mask,
    units,
)
from src.picardcusps.utils.validators import ValidationError

SMALL_D = [1, 2, 3, 5, 7, 11, 23, 163]
coordinate = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def test_make_field_discriminants():
    assert make_field(1).disc == -4
    assert make_field(2).disc == -8
    assert make_field(3).disc == -3
    assert make_field(5).disc == -20
    assert make_field(23).disc == -23
    assert make_field(3).omega_half
    assert not make_field(5).omega_half


def test_make_field_reduces_to_squarefree():
    fld = make_field(12)
    assert fld.d == 3
    assert fld == make_field(3)
    assert "12" in fld.note
    assert make_field(4).disc == -4


@pytest.mark.parametrize("bad", [0, -5, 2.5, True])
def test_make_field_rejects(bad):
    with pytest.raises(ValidationError):
        make_field(bad)


def test_field_from_disc():
    assert field_from_disc(-23).d == 23
    assert field_from_disc(-4).d == 1
    assert field_from_disc(-24).d == 6
    for bad in (-12, -16, 5, -1, -2):
        with pytest.raises(ValidationError):
            field_from_disc(bad)


def test_omega_squared():
    gauss = make_field(1)
    assert gauss.omega * gauss.omega == gauss.element(-1)

    eisenstein = make_field(3)
    # omega^2 = omega - 1
    assert eisenstein.omega * eisenstein.omega == eisenstein.element(-1, 1)

    fld = make_field(5)
    assert fld.sqrt_minus_d * fld.sqrt_minus_d == fld.element(-5)
    assert make_field(7).sqrt_minus_d ** 2 == make_field(7).element(-7)


def test_conjugate_norm_trace():
    fld = make_field(3)
    w = fld.omega
    assert w.conj() == fld.element(1, -1)
    assert w.norm() == 1
    assert w.trace() == 1
    x = fld.element(2, 3)
    assert x * x.conj() == fld.element(x.norm())


def test_inverse_and_division():
    fld = make_field(5)
    x = fld.element(1, 1)
    assert x * x.inverse() == fld.one
    assert (fld.element(6) / x) == x.conj()
    assert x ** -2 * x ** 2 == fld.one
    with pytest.raises(ZeroDivisionError):
        fld.zero.inverse()


def test_mixed_fields_rejected():
    with pytest.raises(ValidationError):
        make_field(1).one + make_field(5).one


def test_integrality():
    fld = make_field(7)
    assert fld.element(3, -2).is_integral()
    half = fld.element(Fraction(1, 2), Fraction(1, 3))
    assert not half.is_integral()
    assert half.denominator() == 6
    with pytest.raises(ValidationError):
        half.int_coords()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_D), coordinate, coordinate, coordinate, coordinate)
def test_norm_is_multiplicative(d, a1, b1, a2, b2):
    fld = make_field(d)
    x, y = fld.element(a1, b1), fld.element(a2, b2)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).trace() == x.trace() + y.trace()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_D), coordinate, coordinate)
def test_norm_nonnegative(d, a, b):
    x = make_field(d).element(a, b)
    assert x.norm() >= 0
    assert (x.norm() == 0) == x.is_zero()


def test_splitting_types():
    gauss = make_field(1)
    assert splitting_type(gauss, 2) is SplittingType.RAMIFIED
    assert splitting_type(gauss, 3) is SplittingType.INERT
    assert splitting_type(gauss, 5) is SplittingType.SPLIT

    fld = make_field(23)
    assert splitting_type(fld, 2) is SplittingType.SPLIT
    assert splitting_type(fld, 3) is SplittingType.SPLIT
    assert splitting_type(fld, 5) is SplittingType.INERT
    assert splitting_type(fld, 23) is SplittingType.RAMIFIED

    assert splitting_type(make_field(5), 2) is SplittingType.RAMIFIED
    assert splitting_type(make_field(3), 2) is SplittingType.INERT

    with pytest.raises(ValidationError):
        splitting_type(gauss, 9)


SPLITTING_D = [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 19, 21, 23, 30, 31, 43, 163, 3299, 4027]


@pytest.mark.parametrize("d", SPLITTING_D)
def test_splitting_type_matches_root_count(d):
    fld = make_field(d)
    t, n = fld.trace_omega, fld.norm_omega
    disc = fld.disc
    expected = {0: SplittingType.INERT, 1: SplittingType.RAMIFIED, 2: SplittingType.SPLIT}

    for p in primerange(2, 998):
        # roots of the minimal polynomial of omega, x^2 - t*x + n, mod p
        roots = sum(1 for x in range(p) if (x * x - t * x + n) % p == 0)
        kind = splitting_type(fld, p)
        assert kind is expected[roots], (disc, p)
        assert (kind is SplittingType.RAMIFIED) == (disc % p == 0)

        if p == 2 and disc % 2:
            assert (kind is SplittingType.SPLIT) == (disc % 8 == 1)
        elif p > 2 and disc % p:
            is_square = any((x * x - disc) % p == 0 for x in range(1, p))
            assert (kind is SplittingType.SPLIT) == is_square


def test_units():
    assert len(units(make_field(1))) == 4
    assert len(units(make_field(3))) == 6
    assert len(units(make_field(5))) == 2
    for u in units(make_field(3)):
        assert u.norm() == 1


def test_elements_up_to_norm():
    gauss = make_field(1)
    assert elements_up_to_norm(gauss, 1) == [(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)]
    for a, b in elements_up_to_norm(make_field(3), 7):
        assert make_field(3).norm_form(a, b) <= 7
    # norms 0..2 in Z[sqrt(-2)]: 0, 1 (two), 2 (two)
    assert len(elements_up_to_norm(make_field(2), 2)) == 5


def test_squarefree_mask():
    mask = squarefree_mask(30)
    assert [n for n in range(31) if mask[n]] == [
        1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30,
    ]


def test_fundamental_discriminants():
    assert list(fundamental_discriminants(3, 30)) == [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]
    assert list(fundamental_discriminants(1, 2)) == []
    assert list(fundamental_discriminants(100, 110)) == [-103, -104, -107]


def test_prime_above_norms():
    gauss = make_field(1)
    assert prime_above(gauss, 5).norm() == 5
    assert prime_above(gauss, 2).norm() == 2
    assert prime_above(gauss, 3).norm() == 9
    assert prime_above(make_field(5), 2).norm() == 2
    assert prime_above(make_field(23), 2).norm() == 2
