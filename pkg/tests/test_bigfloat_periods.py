"""Arbitrary-precision arithmetic and period lattices."""

from fractions import Fraction

import pytest

from heegnercert.bigfloat import (BigComplex, BigFloat, agm, bits_for_digits,
                                  cexp, pi)
from heegnercert.elliptic import CurveQ
from heegnercert.periods import periods, weierstrass_xy


def _digits(x: BigFloat) -> float:
    if x.m == 0:
        return float("inf")
    return -x.mag_exp() * 0.30102999566398114


def test_pi_against_reference():
    wb = bits_for_digits(50)
    s = pi(wb).decimal_str(45)
    assert s.startswith("3.14159265358979323846264338327950288419716939")


def test_agm_sqrt2():
    # AGM(1, sqrt(2)) = Gauss's lemniscatic constant relation; just check
    # convergence invariants: agm(a,b) between min and max, idempotent on equals
    wb = bits_for_digits(60)
    one = BigFloat.from_int(1, wb)
    rt2 = BigFloat.from_int(2, wb).sqrt()
    m = agm(one, rt2)
    assert (m - one).m != 0 and (rt2 - m).m != 0
    same = agm(rt2, rt2)
    assert _digits(same - rt2) > 55


def test_bigfloat_field_ops():
    wb = bits_for_digits(40)
    a = BigFloat.from_fraction(Fraction(7, 3), wb)
    b = BigFloat.from_fraction(Fraction(-11, 5), wb)
    c = (a + b) * (a - b) - (a * a - b * b)
    assert _digits(c) > 35
    q = a / b
    assert _digits(q * b - a) > 35
    assert a.floor_int() == 2
    assert (-a).floor_int() == -3


def test_bigcomplex_exp_identity():
    wb = bits_for_digits(50)
    z = BigComplex(BigFloat.from_fraction(Fraction(1, 3), wb),
                   BigFloat.from_fraction(Fraction(-2, 7), wb))
    w = BigComplex(BigFloat.from_fraction(Fraction(-1, 5), wb),
                   BigFloat.from_fraction(Fraction(1, 2), wb))
    lhs = cexp(z + w, wb)
    rhs = cexp(z, wb) * cexp(w, wb)
    diff = lhs - rhs
    assert _digits(diff.re) > 45 and _digits(diff.im) > 45


def test_periods_37a_omega():
    E = CurveQ.from_coeffs((0, 0, 1, -1, 0))
    lat = periods(E, 50)
    s = lat.w1.decimal_str(45)
    assert s.startswith("2.9934586462319596298320099794525081777975837")
    # tau in the fundamental domain
    assert lat.tau_im.to_fraction() > Fraction(1, 2)


def test_weierstrass_recovers_two_torsion():
    # y^2 = x^3 - x has 2-torsion at x = 0, 1, -1; z = w1/2 maps to one
    E = CurveQ.from_coeffs((0, 0, 0, -1, 0))
    lat = periods(E, 40)
    half = BigComplex.from_real(lat.w1.div_int(2))
    xy = weierstrass_xy(lat, half)
    assert xy is not None
    x, y = xy
    # x should be one of {-1, 0, 1} to 30+ digits, y ~ 0
    cands = [(x.re - BigFloat.from_int(v, x.re.prec)).abs() for v in (-1, 0, 1)]
    assert any(_digits(c) > 30 for c in cands)
    assert _digits(y.re) > 25 and _digits(y.im) > 25


def test_lattice_point_detection():
    E = CurveQ.from_coeffs((0, 0, 1, -1, 0))
    lat = periods(E, 40)
    w2 = lat.w2
    z = BigComplex.from_real(lat.w1.mul_int(3)) + w2.mul_int(-2)
    assert lat.is_lattice_point(z, 25)
    z2 = z + BigComplex.from_real(lat.w1.div_int(7))
    assert not lat.is_lattice_point(z2, 25)
