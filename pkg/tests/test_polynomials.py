from fractions import Fraction

import pytest

from lipfrac.algebra import polynomials as poly


def test_divmod_exact():
    # (x^2 - 1) = (x + 1)(x - 1)
    q, r = poly.divmod_exact((-1, 0, 1), (1, 1))
    assert q == (-1, 1) and r == ()


def test_mul_add_roundtrip():
    a, b = (3, -2, 1), (5, 7)
    q, r = poly.divmod_exact(poly.add(poly.mul(a, b), (11,)), b)
    assert q == a and r == (11,)


@pytest.mark.parametrize(
    "p,lo,hi,n",
    [
        ((-1, -6, 1), 0, 10, 1),  # x^2-6x-1: root 3+sqrt10 in (0,10)
        ((-1, -6, 1), -10, 0, 1),
        ((-2, 0, 1), 1, 2, 1),  # sqrt2
        ((-2, 0, 1), -2, 2, 2),
        ((1, 0, 1), -5, 5, 0),  # x^2+1 has no real roots
    ],
)
def test_sturm_counts(p, lo, hi, n):
    assert poly.count_roots(p, Fraction(lo), Fraction(hi)) == n


def test_isolate_real_roots():
    # (x^2 - 2)(x - 3): roots -sqrt2, sqrt2, 3
    p = poly.mul((-2, 0, 1), (-3, 1))
    ivs = poly.isolate_real_roots(p)
    assert len(ivs) == 3
    for lo, hi in ivs:
        assert poly.count_roots(p, lo, hi) == 1


def test_refine_interval_hits_width():
    lo, hi = poly.refine_interval((-2, 0, 1), Fraction(1), Fraction(2), Fraction(1, 10**6))
    assert hi - lo <= Fraction(1, 10**6)
    assert lo * lo < 2 < hi * hi


def test_interval_evaluate_contains_value():
    p = (1, -3, 0, 2)
    lo, hi = poly.interval_evaluate(p, Fraction(1, 3), Fraction(1, 2))
    for x in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)):
        assert lo <= poly.evaluate(p, x) <= hi


def test_factor_integer_poly():
    # x^4 - x^3 - x - 1 = (x^2 - x - 1)(x^2 + 1)
    factors = sorted(f for f, _ in poly.factor_integer_poly((-1, -1, 0, -1, 1)))
    assert factors == [(-1, -1, 1), (1, 0, 1)]


def test_factor_multiplicity():
    # (x-1)^2 (x+2)
    p = poly.mul(poly.mul((-1, 1), (-1, 1)), (2, 1))
    factors = dict(poly.factor_integer_poly(p))
    assert factors[(-1, 1)] == 2 and factors[(2, 1)] == 1
