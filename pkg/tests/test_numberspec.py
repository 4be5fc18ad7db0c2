from fractions import Fraction

import pytest

from lipfrac.errors import EmptyInput, FieldMismatch, GcdViolation
from lipfrac.algebra.numberspec import (
    embed_element,
    measure_root,
    member_of_Zp,
)


def npi_spec():
    """p^2 + 6p = 1, p = sqrt(10) - 3, beta = 3 + sqrt(10)."""
    return measure_root([1, 1, 1, 1, 1, 1, 2])


def clane1_spec():
    """4p^2 + 12p = 1, p = (sqrt(10) - 3)/2, beta = 6 + 2 sqrt(10)."""
    return measure_root([1] * 12 + [2] * 4)


def test_measure_root_rational():
    s = measure_root([1, 1])
    assert s.beta_min_poly == (-2, 1)
    assert s.p().rational_value() == Fraction(1, 2)


def test_measure_root_npi():
    s = npi_spec()
    assert s.beta_min_poly == (-1, -6, 1)
    assert s.relation_coeffs == (6, 1)
    p = s.p()
    assert p * p + 6 * p == 1


def test_measure_root_golden_minimal_factor():
    # p^4 + p^3 + p = 1 but the minimal polynomial of p is quadratic
    s = measure_root([1, 3, 4])
    assert s.beta_min_poly == (-1, -1, 1)
    p = s.p()
    assert p**4 + p**3 + p == 1
    assert p * p + p == 1


def test_measure_root_errors():
    with pytest.raises(EmptyInput):
        measure_root([])
    with pytest.raises(GcdViolation):
        measure_root([2, 4])
    with pytest.raises(GcdViolation):
        measure_root([2])
    # relaxed mode still produces the root of sum p^(2l) = 1
    s = measure_root([2, 2], allow_gcd_violation=True)
    p = s.p()
    assert 2 * p * p == 1


def test_reciprocity_bracket():
    s = npi_spec()
    for width in (Fraction(1, 10), Fraction(1, 10**6)):
        blo, bhi = s.beta_interval(width)
        plo, phi = s.p_interval
        assert blo * plo <= 1 <= bhi * phi


def test_interval_and_sign():
    s = npi_spec()
    p = s.p()
    lo, hi = p.interval(Fraction(1, 10**8))
    assert hi - lo <= Fraction(1, 10**8)
    # p = sqrt(10) - 3 = 0.16227766...
    assert lo < Fraction(16227767, 10**8)
    assert hi > Fraction(16227766, 10**8)
    assert (1 - p).sign() == 1
    assert (p - 1).sign() == -1
    assert (p * p + 6 * p - 1).sign() == 0


def test_field_arithmetic_exact():
    s = npi_spec()
    p = s.p()
    b = s.beta()
    assert p * b == 1
    assert (p + b) * (p + b) == p * p + 2 * p * b + b * b
    assert (1 / (1 + p)) * (1 + p) == 1
    assert b ** (-2) == p * p


def test_norm_and_denominator():
    s = npi_spec()
    assert s.beta().norm() == -1
    c = clane1_spec()
    assert c.beta().norm() == -4
    x = c.element((Fraction(1, 2), Fraction(3, 4)))
    assert x.denominator() == 4


@pytest.mark.parametrize(
    "spec_fn,value,expected",
    [
        (clane1_spec, Fraction(1, 2), True),  # ring Z[sqrt10, 1/2]
        (clane1_spec, Fraction(1, 3), False),  # 3 does not divide N(beta) = -4
        (npi_spec, Fraction(1, 2), False),  # beta is a unit: Z[p] = Z[sqrt10]
    ],
)
def test_member_of_Zp_rationals(spec_fn, value, expected):
    s = spec_fn()
    assert member_of_Zp(s.from_rational(value)) is expected


def test_member_of_Zp_p_itself():
    s = npi_spec()
    assert member_of_Zp(s.p())
    assert member_of_Zp(s.p() ** 5)


def test_embed_element_cross_spec():
    # e:ssc1 specs share Q(sqrt 3)
    s = measure_root([1, 1, 2, 2])  # 2p + 2p^2 = 1, beta = 1 + sqrt3
    t = measure_root([3] * 20 + [6] * 8, allow_gcd_violation=True)
    # relation 20 p^3 + 8 p^6 = 1 has gcd 3; the SSC pipeline uses q = p^3
    # with 20q + 8q^2 = 1, beta = 10 + 6 sqrt3
    q = measure_root([1] * 20 + [2] * 8)
    img = embed_element(s.p(), q)
    # p_s = (sqrt3 - 1)/2; in q-spec coords beta_q = 10 + 6 sqrt3
    sqrt3 = q.element((Fraction(-5, 3), Fraction(1, 6)))
    assert sqrt3 * sqrt3 == 3
    assert img == (sqrt3 - 1) / 2
    # round trip
    back = embed_element(img, s)
    assert back == s.p()


def test_embed_element_field_mismatch():
    s = npi_spec()  # Q(sqrt10)
    g = measure_root([1, 3, 4])  # Q(sqrt5)
    with pytest.raises(FieldMismatch):
        embed_element(s.p(), g)
