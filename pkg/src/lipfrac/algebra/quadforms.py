"""Binary quadratic forms of positive discriminant: reduction cycles,
class counting, and fundamental units via continued fractions.

Forms are integer triples (a, b, c) with discriminant b^2 - 4ac > 0 and not a
perfect square.  Proper (SL2) classes are cycles of reduced forms under the
rho operator; the ideal-class equivalence used here (I ~ J iff I = xJ for a
field element x of either norm sign) additionally merges a cycle with the
cycle of (-a, b, -c).
"""

from fractions import Fraction
from math import gcd, isqrt

import sympy


def isqrt_floor(n):
    return isqrt(n)


def sqrt_bounds(q):
    """Rational (lo, hi) with lo <= sqrt(q) <= hi for q >= 0."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    n = q.numerator * q.denominator
    s = isqrt(n)
    lo = Fraction(s, q.denominator)
    hi = Fraction(s + 1, q.denominator) if s * s != n else lo
    return lo, hi


def discriminant(form):
    a, b, c = form
    return b * b - 4 * a * c


def is_reduced(form):
    """Reduced indefinite form: |sqrt(D) - 2|a|| < b < sqrt(D), exactly."""
    a, b, c = form
    if b <= 0:
        return False
    d = discriminant(form)
    if b * b >= d:
        return False
    t = 2 * abs(a)
    return (b + t) * (b + t) > d and (b - t) * (b - t) < d


def rho(form):
    """One reduction/cycle step."""
    a, b, c = form
    d = discriminant(form)
    sq = isqrt(d)
    ac = abs(c)
    # r = -b mod 2|c|, shifted into the reduction window
    r = (-b) % (2 * ac)
    if ac > sq:
        # bring r into (-|c|, |c|]
        if r > ac:
            r -= 2 * ac
    else:
        # bring r into (sq - 2|c|, sq]
        while r > sq:
            r -= 2 * ac
        while r <= sq - 2 * ac:
            r += 2 * ac
    return (c, r, (r * r - d) // (4 * c))


def reduce_form(form):
    d = discriminant(form)
    sq = isqrt(d)
    seen = set()
    while not is_reduced(form):
        form = rho(form)
        if form in seen:
            raise ArithmeticError(f"reduction does not terminate for {form}")
        seen.add(form)
    return form


def cycle_of(form):
    """The rho-cycle through the reduction of `form`, as a frozenset."""
    f0 = reduce_form(form)
    out = [f0]
    f = rho(f0)
    while f != f0:
        out.append(f)
        f = rho(f)
    return frozenset(out)


def reduced_forms(d):
    """All reduced primitive forms of discriminant d > 0, d not a square."""
    sq = isqrt(d)
    if sq * sq == d:
        raise ValueError("square discriminant")
    out = []
    for b in range(1, sq + 1):
        if (d - b * b) % 4 != 0:
            continue
        m = (d - b * b) // 4  # = -a*c > 0
        for a in sympy.divisors(m):
            # reduced: sqrt(d) - b < 2a < sqrt(d) + b  (a = |a|)
            t = 2 * a
            if not ((b + t) * (b + t) > d and (b - t) * (b - t) < d):
                continue
            c = m // a
            for fa, fc in ((a, -c), (-a, c)):
                if gcd(gcd(abs(fa), b), abs(fc)) == 1:
                    out.append((fa, b, fc))
    return out


def proper_cycles(d):
    """Partition of the reduced primitive forms of disc d into rho-cycles."""
    forms = set(reduced_forms(d))
    cycles = []
    while forms:
        f = next(iter(forms))
        cyc = cycle_of(f)
        cycles.append(cyc)
        forms -= cyc
    return cycles


def wide_classes(d):
    """Cycles merged under scaling by negative-norm elements, i.e. the
    involution (a, b, c) -> (-a, b, -c).  One representative cycle-set per
    ideal class of the order of discriminant d."""
    cycles = proper_cycles(d)
    index = {}
    for i, cyc in enumerate(cycles):
        for f in cyc:
            index[f] = i
    parent = list(range(len(cycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, cyc in enumerate(cycles):
        a, b, c = next(iter(cyc))
        j = index[reduce_form((-a, b, -c))]
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups = {}
    for i, cyc in enumerate(cycles):
        groups.setdefault(find(i), []).append(cyc)
    return [frozenset().union(*g) for g in groups.values()]


def class_representative_forms(d):
    """One reduced form with a > 0 per wide class of discriminant d."""
    reps = []
    for cls in wide_classes(d):
        f = min(f for f in cls if f[0] > 0)
        reps.append(f)
    return sorted(reps)


def fundamental_decomposition(d):
    """d = f^2 * d0 with d0 a fundamental discriminant; returns (d0, f)."""
    if d <= 0 or d % 4 in (2, 3):
        raise ValueError("not a discriminant")
    m = 1
    for p, e in sympy.factorint(d).items():
        if e % 2:
            m *= p
    # m = squarefree kernel of d (with sign positive here)
    if m % 4 == 1:
        d0 = m
    else:
        d0 = 4 * m
    f2, rem = divmod(d, d0)
    if rem:
        raise ArithmeticError("discriminant decomposition failed")
    f = isqrt(f2)
    if f * f != f2:
        raise ArithmeticError("discriminant decomposition failed")
    return d0, f


def intermediate_discriminants(d):
    """Discriminants of the orders containing the order of discriminant d,
    ordered by conductor (largest order first)."""
    d0, f = fundamental_decomposition(d)
    return [d0 * c * c for c in sorted(sympy.divisors(f))]


def pell_unit(n):
    """Minimal (x, y), x, y > 0, with x^2 - n y^2 = ±1, via the continued
    fraction of sqrt(n).  n > 1, not a square."""
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise ValueError("square input")
    p_i, q_i = a0, n - a0 * a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while q_i != 1:
        a = (a0 + p_i) // q_i
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        p_i = a * q_i - p_i
        q_i = (n - p_i * p_i) // q_i
    return h, k


def fundamental_unit(d):
    """(t, u) with eps = (t + u*sqrt(d))/2 the fundamental unit > 1 of the
    order of discriminant d; t^2 - d u^2 = ±4."""
    if d % 4 == 0:
        n = d // 4
        x, y = pell_unit(n)
        return 2 * x, y
    # d ≡ 1 (mod 4): Z[sqrt(d)] has unit index 1 or 3 in O_d
    x, y = pell_unit(d)
    # try a half-integer cube root (t, u odd): ((t + u sqrt(d))/2)^3 = x + y sqrt(d)
    # comparing sqrt(d) parts: u(3t^2 + d u^2) = 8y
    u = 1
    while u * u * u * d <= 8 * y + 3 * u:
        rhs = 8 * y
        # solve u(3t^2 + d u^2) = 8y for t
        if rhs % u == 0:
            t2 = (rhs // u - d * u * u)
            if t2 > 0 and t2 % 3 == 0:
                t2 //= 3
                t = isqrt(t2)
                if t * t == t2 and (t * t - d * u * u) in (4, -4):
                    return t, u
        u += 2
    return 2 * x, 2 * y


def unit_value_bounds(d, t, u):
    """Rational (lo, hi) enclosing eps = (t + u sqrt(d)) / 2."""
    slo, shi = sqrt_bounds(d)
    return (Fraction(t) + u * slo) / 2, (Fraction(t) + u * shi) / 2
