"""The measure root p, its inverse beta, and exact arithmetic in Q(beta).

A spec fixes the number field Q(beta) with beta = 1/p an algebraic integer:
its monic minimal polynomial, isolating intervals for p and beta, and the
defining relation  sum_l xi_l p^l = 1.  Field elements are coordinate vectors
over the power basis 1, beta, ..., beta^(d-1); all arithmetic is exact and
equality is coordinate equality (sound because the modulus is irreducible).
"""

from fractions import Fraction
from math import gcd

import sympy

from ..errors import EmptyInput, FieldMismatch, GcdViolation
from . import polynomials as poly


def _valuation(n, q):
    v = 0
    n = abs(n)
    while n % q == 0 and n:
        n //= q
        v += 1
    return v


class AlgebraicNumberSpec:
    """Number-field data for a measure root p and beta = 1/p."""

    def __init__(self, beta_min_poly, beta_interval, relation_coeffs=None):
        beta_min_poly = tuple(int(c) for c in beta_min_poly)
        if beta_min_poly[-1] != 1:
            raise ValueError("beta minimal polynomial must be monic")
        self.beta_min_poly = beta_min_poly
        self.degree = len(beta_min_poly) - 1
        self.relation_coeffs = (
            tuple(int(c) for c in relation_coeffs) if relation_coeffs else None
        )
        lo, hi = Fraction(beta_interval[0]), Fraction(beta_interval[1])
        if lo != hi:
            flo = poly.evaluate(beta_min_poly, lo)
            fhi = poly.evaluate(beta_min_poly, hi)
            if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
                raise ValueError("beta interval does not bracket a simple root")
        self._beta_iv = (lo, hi)
        # p = 1/beta: reversal of the beta polynomial, leading coefficient > 0
        rev = tuple(reversed(beta_min_poly))
        self.p_min_poly = rev if rev[-1] > 0 else poly.neg(rev)
        # beta^d .. beta^(2d-2) over the power basis, for reduction after mul
        d = self.degree
        reduction = []
        cur = [Fraction(-c) for c in beta_min_poly[:-1]]
        reduction.append(tuple(cur))
        for _ in range(d - 2):
            top = cur[-1]
            shifted = [Fraction(0)] + cur[:-1]
            cur = [s + top * r for s, r in zip(shifted, reduction[0])]
            reduction.append(tuple(cur))
        self._reduction = reduction
        self._conjugates = None

    # -- intervals ---------------------------------------------------------

    def beta_interval(self, width=None):
        lo, hi = self._beta_iv
        if width is not None and hi - lo > width and lo != hi:
            lo, hi = poly.refine_interval(self.beta_min_poly, lo, hi, width)
            self._beta_iv = (lo, hi)
        return self._beta_iv

    @property
    def p_interval(self):
        lo, hi = self.beta_interval()
        if lo == hi:
            return (1 / hi, 1 / hi)
        if lo <= 0:
            lo, hi = self.beta_interval(Fraction(1, 4))
        return (1 / hi, 1 / lo)

    def real_conjugate_intervals(self):
        """Isolating intervals for every real root of beta_min_poly."""
        if self._conjugates is None:
            if self.degree == 1:
                self._conjugates = [self._beta_iv]
            else:
                self._conjugates = poly.isolate_real_roots(self.beta_min_poly)
        return self._conjugates

    # -- elements ----------------------------------------------------------

    def element(self, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError("coordinate length mismatch")
        return FieldElement(self, coords)

    def from_rational(self, q):
        return self.element((Fraction(q),) + (Fraction(0),) * (self.degree - 1))

    def zero(self):
        return self.from_rational(0)

    def one(self):
        return self.from_rational(1)

    def beta(self):
        if self.degree == 1:
            return self.from_rational(-self.beta_min_poly[0])
        return self.element(
            (0, 1) + (0,) * (self.degree - 2) if self.degree >= 2 else (0,)
        )

    def p(self):
        return self.beta().inverse()

    def beta_norm(self):
        """N(beta) = (-1)^d * constant coefficient."""
        d = self.degree
        return (-1 if d % 2 else 1) * self.beta_min_poly[0]

    def beta_trace_coeff(self):
        return -self.beta_min_poly[-2]

    def from_p_polynomial(self, coeffs):
        """Evaluate an integer/rational polynomial at p, exactly."""
        acc = self.zero()
        pw = self.one()
        pval = self.p()
        for c in coeffs:
            if c:
                acc = acc + pw * Fraction(c)
            pw = pw * pval
        return acc

    def __repr__(self):
        return f"AlgebraicNumberSpec(beta_min_poly={self.beta_min_poly})"

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraicNumberSpec)
            and self.beta_min_poly == other.beta_min_poly
        )

    def __hash__(self):
        return hash(self.beta_min_poly)


class FieldElement:
    __slots__ = ("spec", "coords")

    def __init__(self, spec, coords):
        self.spec = spec
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch("elements of different fields")
            return other
        return self.spec.from_rational(Fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(
            self.spec, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(
            self.spec, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return FieldElement(self.spec, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        d = self.spec.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(other.coords):
                if b:
                    prod[i + j] += a * b
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self.spec._reduction[k - d]
                for j in range(d):
                    out[j] += c * red[j]
        return FieldElement(self.spec, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in Q[x] against the (irreducible) minimal polynomial
        f = tuple(Fraction(c) for c in self.spec.beta_min_poly)
        g = poly.trim(self.coords)
        r0, r1 = f, g
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = poly.divmod_exact(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly.sub(s0, poly.mul(q, s1))
        if poly.degree(r0) != 0:
            raise ArithmeticError("zero divisor: modulus not irreducible")
        inv = poly.scale(s0, 1 / Fraction(r0[0]))
        coords = list(inv) + [Fraction(0)] * (self.spec.degree - len(inv))
        return FieldElement(self.spec, tuple(coords[: self.spec.degree]))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.spec.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.spec == other.spec and self.coords == other.coords

    def __hash__(self):
        return hash((self.spec, self.coords))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coords[0]

    def interval(self, width=Fraction(1, 1024)):
        """A rational interval certified to contain the real value."""
        w = width
        while True:
            lo, hi = self.spec.beta_interval(w)
            ilo, ihi = poly.interval_evaluate(self.coords, lo, hi)
            if ihi - ilo <= width:
                return (ilo, ihi)
            w = w / 16

    def sign(self):
        if self.is_zero():
            return 0
        w = Fraction(1, 16)
        while True:
            lo, hi = self.spec.beta_interval(w)
            ilo, ihi = poly.interval_evaluate(self.coords, lo, hi)
            if ilo > 0:
                return 1
            if ihi < 0:
                return -1
            w = w / 16

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def mult_matrix(self):
        """Rows i = coordinates of beta^i * self (row-vector convention)."""
        rows = []
        cur = self
        b = self.spec.beta()
        for _ in range(self.spec.degree):
            rows.append(cur.coords)
            cur = cur * b
        return rows

    def norm(self):
        """Field norm as an exact rational (determinant of mult_matrix)."""
        d = self.spec.degree
        if d == 1:
            return self.coords[0]
        if d == 2:
            a, b = self.coords
            t = self.spec.beta_trace_coeff()
            n = self.spec.beta_norm()
            return a * a + a * b * t + b * b * n
        m = [list(r) for r in self.mult_matrix()]
        det = Fraction(1)
        for c in range(d):
            piv = next((i for i in range(c, d) if m[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, d):
                f = m[i][c] * inv
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det

    def denominator(self):
        den = 1
        for c in self.coords:
            den = den * c.denominator // gcd(den, c.denominator)
        return den

    def conjugate_interval(self, root_interval, width=Fraction(1, 1024)):
        """Enclosure of the image of self under the embedding sending beta to
        the root isolated by root_interval."""
        f = self.spec.beta_min_poly
        lo, hi = root_interval
        while True:
            ilo, ihi = poly.interval_evaluate(self.coords, lo, hi)
            if ihi - ilo <= width or lo == hi:
                return (ilo, ihi)
            lo, hi = poly.refine_interval(f, lo, hi, (hi - lo) / 16)

    def __repr__(self):
        return f"<{' + '.join(f'{c}*b^{i}' for i, c in enumerate(self.coords))}>"


def measure_root(exponents, allow_gcd_violation=False):
    """Spec for the unique p in (0,1) with sum over exponents of p^l = 1.

    `exponents` is a multiset of positive integers (the lambda_i).  The monic
    reversal x^n - xi_1 x^(n-1) - ... - xi_n has 1/p as its unique positive
    root; the minimal polynomial is the irreducible factor that isolates it.
    """
    exps = sorted(int(e) for e in exponents)
    if not exps:
        raise EmptyInput("no exponents")
    if any(e <= 0 for e in exps):
        raise ValueError("exponents must be positive")
    if len(exps) == 1:
        raise GcdViolation("a single map forces p = 1, outside (0,1)")
    g = 0
    for e in set(exps):
        g = gcd(g, e)
    if g != 1 and not allow_gcd_violation:
        raise GcdViolation(f"gcd of exponents is {g}")
    n = exps[-1]
    xi = [0] * (n + 1)
    for e in exps:
        xi[e] += 1
    relation = tuple(xi[1:])
    # monic reversal: x^n - xi_1 x^(n-1) - ... - xi_n, unique root beta > 1
    rev = tuple([-xi[n - i] for i in range(n)] + [1])
    lo, hi = Fraction(1), Fraction(2)
    while poly.evaluate(rev, hi) <= 0:
        hi *= 2
    lo, hi = poly.refine_interval(rev, lo, hi, Fraction(1, 16))
    factors = [f for f, _ in poly.factor_integer_poly(rev)]
    while True:
        live = [
            f for f in factors if poly.degree(f) >= 1 and poly.count_roots(f, lo, hi)
        ]
        if len(live) == 1:
            fmin = live[0]
            break
        lo, hi = poly.refine_interval(rev, lo, hi, (hi - lo) / 16)
    if fmin[-1] < 0:
        fmin = poly.neg(fmin)
    # shrink the interval so it isolates the root of fmin itself
    while poly.count_roots(fmin, lo, hi) != 1 or poly.evaluate(fmin, lo) == 0:
        lo, hi = poly.refine_interval(rev, lo, hi, (hi - lo) / 16)
    return AlgebraicNumberSpec(fmin, (lo, hi), relation_coeffs=relation)


def member_of_Zp(x):
    """Decide x in Z[p] = Z[beta, 1/beta], exactly.

    A denominator prime must divide N(beta); multiplying by beta lowers the
    q-adic denominator valuation by at most v_q(N(beta)) per step, giving the
    terminating bound K* = d * max_q ceil(v_q(den) / max(1, v_q(N(beta)))).
    """
    den = x.denominator()
    if den == 1:
        return True
    nbeta = abs(x.spec.beta_norm())
    if nbeta == 0:
        return False
    kstar = 0
    for q in sympy.factorint(den):
        vq_n = _valuation(nbeta, q)
        if vq_n == 0:
            return False
        vq_d = _valuation(den, q)
        kstar = max(kstar, -(-vq_d // max(1, vq_n)))
    kstar *= x.spec.degree
    b = x.spec.beta()
    y = x
    for _ in range(kstar + 1):
        if y.denominator() == 1:
            return True
        y = y * b
    return False


def embed_element(x, target):
    """Image of x in the field of `target`, when the fields coincide.

    Exact for rational and quadratic specs; raises FieldMismatch otherwise
    (per the artifact's degree <= 2 exactness boundary).
    """
    src = x.spec
    if src == target:
        return target.element(x.coords)
    if src.degree == 1:
        val = poly.evaluate(x.coords, -Fraction(src.beta_min_poly[0]))
        return target.from_rational(val)
    if src.degree != 2 or target.degree != 2:
        raise FieldMismatch("exact cross-field embedding supported up to degree 2")
    disc_s = src.beta_trace_coeff() ** 2 - 4 * src.beta_norm()
    disc_t = target.beta_trace_coeff() ** 2 - 4 * target.beta_norm()
    ratio = Fraction(disc_s, disc_t)
    num, dn = ratio.numerator, ratio.denominator
    rn, rd = sympy.integer_nthroot(num, 2), sympy.integer_nthroot(dn, 2)
    if not (rn[1] and rd[1]):
        raise FieldMismatch("fields differ (discriminant ratio is not a square)")
    scale = Fraction(int(rn[0]), int(rd[0]))
    # sqrt(disc_s) = scale * (2*beta_t - T_t); beta_s = (T_s ± sqrt(disc_s)) / 2
    tt = target.beta_trace_coeff()
    ts = src.beta_trace_coeff()
    candidates = []
    for sgn in (1, -1):
        val = target.element(
            (Fraction(ts, 2) - sgn * scale * Fraction(tt, 2), sgn * scale)
        )
        acc = target.zero()
        pw = target.one()
        for c in src.beta_min_poly:
            acc = acc + pw * c
            pw = pw * val
        if acc.is_zero():
            candidates.append(val)
    # the two candidates are the two distinct real roots; refine until
    # exactly one overlaps the isolating interval of beta_src
    w = Fraction(1, 64)
    while True:
        slo, shi = src.beta_interval(w)
        alive = []
        for val in candidates:
            clo, chi = val.interval(w)
            if not (chi < slo or clo > shi):
                alive.append(val)
        if len(alive) == 1:
            beta_img = alive[0]
            break
        if not alive:
            raise FieldMismatch("no root of the source polynomial matches")
        w = w / 64
    out = target.zero()
    pw = target.one()
    for c in x.coords:
        out = out + pw * c
        pw = pw * beta_img
    return out
