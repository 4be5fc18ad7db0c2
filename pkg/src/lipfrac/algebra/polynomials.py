"""Exact univariate polynomial arithmetic over Q, Sturm sequences, root isolation.

Polynomials are tuples of coefficients in increasing degree order; the zero
polynomial is the empty tuple.  All arithmetic is exact (int / Fraction).
"""

from fractions import Fraction
from math import gcd

import sympy


def trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p):
    return tuple(-c for c in p)


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def scale(p, c):
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_exact(p, q):
    """Euclidean division over Q; returns (quotient, remainder)."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    qd, qlc = degree(q), Fraction(q[-1])
    out = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    while len(trim(r)) - 1 >= qd and trim(r):
        r = list(trim(r))
        k = len(r) - 1 - qd
        f = Fraction(r[-1]) / qlc
        out[k] = f
        for i in range(len(q)):
            r[k + i] -= f * q[i]
        r = list(trim(r))
    return trim(out), trim(r)


def derivative(p):
    return trim(i * c for i, c in enumerate(p) if i > 0)


def content(p):
    """Positive gcd of integer coefficients (0 for the zero polynomial)."""
    g = 0
    for c in p:
        g = gcd(g, abs(int(c)))
    return g


def primitive_part(p):
    """Integer polynomial divided by its content, sign fixed so the leading
    coefficient is positive."""
    g = content(p)
    if g == 0:
        return ()
    q = tuple(int(c) // g for c in p)
    if q[-1] < 0:
        q = neg(q)
    return q


def to_integer(p):
    """Clear denominators, returning a primitive integer polynomial."""
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return primitive_part(tuple(int(Fraction(c) * den) for c in p))


def sturm_chain(p):
    chain = [trim(p), derivative(p)]
    while chain[-1]:
        _, r = divmod_exact(chain[-2], chain[-1])
        if not r:
            break
        chain.append(neg(r))
    return [c for c in chain if c]


def _sign_variations(chain, x):
    signs = []
    for p in chain:
        v = evaluate(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p, lo, hi, chain=None):
    """Number of distinct real roots of p in (lo, hi].  p must be nonzero."""
    if chain is None:
        chain = sturm_chain(p)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def root_bound(p):
    """Cauchy bound: all real roots lie in [-B, B]."""
    lc = abs(Fraction(p[-1]))
    return 1 + max((abs(Fraction(c)) / lc for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p):
    """Disjoint rational intervals (lo, hi), each containing exactly one real
    root of p, with p(lo) != 0 != p(hi).  p must be squarefree at its roots of
    interest; repeated roots are collapsed by Sturm counting."""
    p = trim(p)
    chain = sturm_chain(p)
    b = root_bound(p)
    lo, hi = -b, b
    while evaluate(p, lo) == 0:
        lo -= 1
    while evaluate(p, hi) == 0:
        hi += 1
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b2 = stack.pop()
        n = count_roots(p, a, b2, chain)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b2))
            continue
        m = Fraction(a + b2, 2)
        while evaluate(p, m) == 0:
            m = Fraction(a + 2 * b2, 3)  # rational root hit; shift the cut
            if evaluate(p, m) == 0:
                m = (a + m) / 2
        stack.append((a, m))
        stack.append((m, b2))
    out.sort()
    return out


def refine_interval(p, lo, hi, width):
    """Bisect an isolating interval of p until hi - lo <= width.

    Requires sign(p(lo)) != sign(p(hi)), both nonzero (true for an isolating
    interval of a simple root when p has no rational roots in it)."""
    flo = evaluate(p, lo)
    while hi - lo > width:
        m = Fraction(lo + hi, 2)
        fm = evaluate(p, m)
        if fm == 0:
            # rational root: degenerate to the exact point
            return m, m
        if (fm > 0) == (flo > 0):
            lo, flo = m, fm
        else:
            hi = m
    return lo, hi


def interval_evaluate(p, lo, hi):
    """Interval extension of p over [lo, hi] via Horner with interval steps."""
    alo = ahi = Fraction(0)
    for c in reversed(p):
        c = Fraction(c)
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def factor_integer_poly(p):
    """Irreducible integer factors of a primitive integer polynomial.

    Returns a list of (factor, multiplicity) with factors primitive and
    positive-leading.  Delegates to sympy's factorizer.
    """
    x = sympy.Symbol("x")
    expr = sympy.Poly(list(reversed(p)), x)
    _, factors = expr.factor_list()
    out = []
    for f, mult in factors:
        coeffs = [int(c) for c in reversed(f.all_coeffs())]
        out.append((primitive_part(tuple(coeffs)), int(mult)))
    return out
