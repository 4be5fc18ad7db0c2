"""IFS data model: exact similarities, ratio roots, dimensions, JSON format.

Geometric systems carry full rational data (ratio, exactly orthogonal matrix,
translation); abstract systems carry ratios only and assume strong
separation, which is all the algebra-side theorems need.
"""

from fractions import Fraction
from math import gcd

import sympy

from .errors import (
    FieldMismatch,
    NonCommensurable,
    NotComparable,
    ParseError,
    PredicateUnresolved,
)
from .algebra import polynomials as poly
from .algebra.numberspec import embed_element, measure_root


def _frac(x):
    if isinstance(x, str):
        if "/" in x:
            n, d = x.split("/")
            return Fraction(int(n), int(d))
        return Fraction(int(x))
    return Fraction(x)


def _frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Similarity:
    """x -> ratio * A x + t with A exactly orthogonal and rational."""

    __slots__ = ("ratio", "orthogonal", "translation")

    def __init__(self, ratio, orthogonal, translation):
        self.ratio = Fraction(ratio)
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        self.orthogonal = tuple(tuple(Fraction(v) for v in row) for row in orthogonal)
        self.translation = tuple(Fraction(v) for v in translation)
        d = len(self.translation)
        if len(self.orthogonal) != d or any(len(r) != d for r in self.orthogonal):
            raise ValueError("dimension mismatch")
        for i in range(d):
            for j in range(d):
                dot = sum(self.orthogonal[i][k] * self.orthogonal[j][k] for k in range(d))
                if dot != (1 if i == j else 0):
                    raise ValueError("matrix is not exactly orthogonal")

    @property
    def dim(self):
        return len(self.translation)

    def __call__(self, point):
        return tuple(
            self.ratio * sum(self.orthogonal[i][j] * point[j] for j in range(self.dim))
            + self.translation[i]
            for i in range(self.dim)
        )

    def compose(self, other):
        d = self.dim
        orth = tuple(
            tuple(
                sum(self.orthogonal[i][k] * other.orthogonal[k][j] for k in range(d))
                for j in range(d)
            )
            for i in range(d)
        )
        return Similarity(self.ratio * other.ratio, orth, self(other.translation))

    def orientation_sign(self):
        m = [list(row) for row in self.orthogonal]
        det = Fraction(1)
        n = len(m)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                f = m[i][c] * inv
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return 1 if det > 0 else -1

    def fixed_point(self):
        """Exact solution of S(x) = x."""
        d = self.dim
        m = [
            [
                (1 if i == j else 0) - self.ratio * self.orthogonal[i][j]
                for j in range(d)
            ]
            + [self.translation[i]]
            for i in range(d)
        ]
        m = [[Fraction(v) for v in row] for row in m]
        for c in range(d):
            piv = next(i for i in range(c, d) if m[i][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [v * inv for v in m[c]]
            for i in range(d):
                if i != c and m[i][c]:
                    f = m[i][c]
                    m[i] = [v - f * w for v, w in zip(m[i], m[c])]
        return tuple(m[i][d] for i in range(d))

    def key(self):
        return (self.ratio, self.orthogonal, self.translation)

    def __eq__(self, other):
        return isinstance(other, Similarity) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Similarity(r={self.ratio}, t={self.translation})"


def identity_matrix(d):
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


class OpenRegion:
    """Finite union of open axis-aligned boxes."""

    def __init__(self, boxes):
        self.boxes = tuple(
            (tuple(Fraction(v) for v in lo), tuple(Fraction(v) for v in hi))
            for lo, hi in boxes
        )
        if not self.boxes:
            raise ValueError("empty region")
        for lo, hi in self.boxes:
            if any(a >= b for a, b in zip(lo, hi)):
                raise ValueError("degenerate box")

    @property
    def dim(self):
        return len(self.boxes[0][0])

    def is_single_box(self):
        return len(self.boxes) == 1

    def contains_point(self, pt):
        return any(
            all(lo[i] < pt[i] < hi[i] for i in range(len(pt)))
            for lo, hi in self.boxes
        )

    def contains_box(self, blo, bhi, margin=0):
        """Certified: the closed box [blo, bhi] lies in some region box, at
        distance >= margin from that box's complement (strictly inside when
        margin = 0)."""
        d = len(blo)
        for lo, hi in self.boxes:
            if margin == 0:
                ok = all(blo[i] > lo[i] and bhi[i] < hi[i] for i in range(d))
            else:
                ok = all(
                    blo[i] >= lo[i] + margin and bhi[i] <= hi[i] - margin
                    for i in range(d)
                )
            if ok:
                return True
        return False

    def serialize(self):
        return {
            "boxes": [
                {"lo": [_frac_str(v) for v in lo], "hi": [_frac_str(v) for v in hi]}
                for lo, hi in self.boxes
            ]
        }


class IFS:
    """A commensurable contracting system with its algebraic data."""

    def __init__(self, maps=None, ratios=None, osc_region=None, ambient_dim=None,
                 kind=None):
        if maps is not None:
            self.maps = tuple(maps)
            self.ratios = tuple(s.ratio for s in self.maps)
            self.ambient_dim = self.maps[0].dim
            self.kind = "geometric"
            if any(s.dim != self.ambient_dim for s in self.maps):
                raise ValueError("maps of mixed dimension")
        else:
            self.maps = None
            self.ratios = tuple(Fraction(r) for r in ratios)
            self.ambient_dim = ambient_dim
            self.kind = "abstract"
        if kind is not None:
            self.kind = kind
        self.osc_region = osc_region
        try:
            self.ratio_root, self.exponents = ratio_root(self.ratios)
            self.spec = measure_root(self.exponents)
        except NonCommensurable:
            self.ratio_root = None
            self.exponents = None
            self.spec = None

    @property
    def commensurable(self):
        return self.ratio_root is not None

    def n_maps(self):
        return len(self.ratios)

    def serialize(self):
        if self.kind != "geometric":
            out = {"ambient_dim": self.ambient_dim, "ratios": [
                _frac_str(r) for r in self.ratios], "abstract": True}
            return out
        out = {
            "ambient_dim": self.ambient_dim,
            "maps": [
                {
                    "ratio": _frac_str(s.ratio),
                    "orthogonal": [[_frac_str(v) for v in row] for row in s.orthogonal],
                    "translation": [_frac_str(v) for v in s.translation],
                }
                for s in self.maps
            ],
        }
        if self.osc_region is not None:
            out["osc_region"] = self.osc_region.serialize()
        return out

    @classmethod
    def deserialize(cls, data):
        try:
            if data.get("abstract"):
                return cls(
                    ratios=[_frac(r) for r in data["ratios"]],
                    ambient_dim=data.get("ambient_dim"),
                )
            maps = [
                Similarity(
                    _frac(m["ratio"]),
                    [[_frac(v) for v in row] for row in m["orthogonal"]],
                    [_frac(v) for v in m["translation"]],
                )
                for m in data["maps"]
            ]
            region = None
            if data.get("osc_region"):
                region = OpenRegion(
                    [
                        ([_frac(v) for v in b["lo"]], [_frac(v) for v in b["hi"]])
                        for b in data["osc_region"]["boxes"]
                    ]
                )
            return cls(maps=maps, osc_region=region)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(str(exc)) from exc


def interval_ifs(data):
    """1D geometric IFS from (ratio, sign, offset) triples."""
    maps = []
    for ratio, sign, offset in data:
        maps.append(Similarity(Fraction(ratio), ((Fraction(sign),),), (Fraction(offset),)))
    return maps


def _prime_exponent_vector(r, support):
    out = []
    num, den = r.numerator, r.denominator
    for q in support:
        e = 0
        while num % q == 0:
            num //= q
            e += 1
        while den % q == 0:
            den //= q
            e -= 1
        out.append(e)
    return tuple(out), num, den


def _support_of(ratios):
    primes = set()
    for r in ratios:
        for q in sympy.factorint(r.numerator):
            primes.add(int(q))
        for q in sympy.factorint(r.denominator):
            primes.add(int(q))
    return sorted(primes)


def ratio_root(ratios):
    """(r, exponents) with ratio_i = r^lambda_i, gcd(lambda) = 1, r in (0,1)."""
    ratios = [Fraction(r) for r in ratios]
    if not ratios:
        raise ValueError("no ratios")
    if any(not 0 < r < 1 for r in ratios):
        raise ValueError("ratios must lie in (0, 1)")
    support = _support_of(ratios)
    vecs = []
    for r in ratios:
        v, num, den = _prime_exponent_vector(r, support)
        vecs.append(v)
    # all exponent vectors must be positive multiples of one primitive vector
    base = None
    for v in vecs:
        if any(v):
            g = 0
            for x in v:
                g = gcd(g, abs(x))
            prim = tuple(x // g for x in v)
            if base is None:
                base = prim
            elif prim != base:
                raise NonCommensurable("exponent vectors are not parallel")
    lambdas = []
    for v in vecs:
        j = next(i for i in range(len(base)) if base[i] != 0)
        if v[j] % base[j] != 0:
            raise NonCommensurable("exponent vectors are not parallel")
        lam = v[j] // base[j]
        if tuple(lam * b for b in base) != v or lam <= 0:
            raise NonCommensurable("exponent vectors are not parallel")
        lambdas.append(lam)
    g = 0
    for lam in lambdas:
        g = gcd(g, lam)
    lambdas = [lam // g for lam in lambdas]
    root = Fraction(1)
    for q, e in zip(_support_of(ratios), base):
        root *= Fraction(q) ** (e * g)
    if not 0 < root < 1:
        raise NonCommensurable("no generator inside (0, 1)")
    return root, tuple(lambdas)


def commensurable_pair(r_s, r_t):
    """Smallest positive (m, n) with r_s^m = r_t^n, or None."""
    r_s, r_t = Fraction(r_s), Fraction(r_t)
    support = _support_of([r_s, r_t])
    vs, _, _ = _prime_exponent_vector(r_s, support)
    vt, _, _ = _prime_exponent_vector(r_t, support)
    # m * vs = n * vt
    for i in range(len(support)):
        for j in range(len(support)):
            if vs[i] * vt[j] != vs[j] * vt[i]:
                return None
    j = next(i for i in range(len(support)) if vs[i] != 0)
    m, n = abs(vt[j]), abs(vs[j])
    g = gcd(m, n)
    return m // g, n // g


def dimension_enclosure(ifs, precision=Fraction(1, 10**5)):
    """Certified rational interval for the similarity dimension."""
    precision = Fraction(precision)
    if ifs.commensurable:
        spec = ifs.spec
        p = spec.p()
        r = ifs.ratio_root

        def cmp_mid(u, v):
            # sign of F(u/v): F > 0 iff r^(u/v) > p iff r^u > p^v
            diff = spec.from_rational(Fraction(r) ** u) - p**v
            return diff.sign()

    else:

        def cmp_mid(u, v):
            return _sum_ratio_power_sign(ifs.ratios, u, v)

    lo, hi = Fraction(0), Fraction(1)
    while _f_sign(ifs, hi) > 0:
        lo, hi = hi, hi * 2
    while hi - lo > precision:
        mid = (lo + hi) / 2
        s = cmp_mid(mid.numerator, mid.denominator)
        if s == 0:
            return (mid, mid)
        if s > 0:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def _f_sign(ifs, s):
    s = Fraction(s)
    if ifs.commensurable:
        spec = ifs.spec
        diff = spec.from_rational(Fraction(ifs.ratio_root) ** s.numerator) - spec.p() ** s.denominator
        return diff.sign()
    return _sum_ratio_power_sign(ifs.ratios, s.numerator, s.denominator)


def _nth_root_interval(x, n, width):
    """Rational interval around x^(1/n) for x in (0, 1]."""
    x = Fraction(x)
    lo, hi = Fraction(0), Fraction(1)
    # root of t^n - x
    while hi - lo > width:
        mid = (lo + hi) / 2
        if mid**n < x:
            lo = mid
        elif mid**n > x:
            hi = mid
        else:
            return (mid, mid)
    return (lo, hi)


def _sum_ratio_power_sign(ratios, u, v, cap=60):
    """Sign of sum r_i^(u/v) - 1, exact when all terms are rational."""
    exact = []
    rest = []
    for r in ratios:
        xu = Fraction(r) ** u
        rn = sympy.integer_nthroot(xu.numerator, v)
        rd = sympy.integer_nthroot(xu.denominator, v)
        if rn[1] and rd[1]:
            exact.append(Fraction(int(rn[0]), int(rd[0])))
        else:
            rest.append(xu)
    base = sum(exact, Fraction(0)) - 1
    if not rest:
        return 0 if base == 0 else (1 if base > 0 else -1)
    width = Fraction(1, 16)
    for _ in range(cap):
        lo = base
        hi = base
        for xu in rest:
            l2, h2 = _nth_root_interval(xu, v, width)
            lo += l2
            hi += h2
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        width /= 16
    raise PredicateUnresolved("dimension sign test hit the refinement cap")


def dimension_is(ifs, s):
    """Exact test: similarity dimension equals the rational s."""
    return _f_sign(ifs, Fraction(s)) == 0


def dimensions_equal(s_ifs, t_ifs):
    """Exact decision of hdim equality for commensurable systems.

    Requires commensurable ratio roots (condition (ii) is checked first in
    the decision pipeline); decides p_S^m = p_T^n as algebraic numbers.
    """
    if not (s_ifs.commensurable and t_ifs.commensurable):
        raise NotComparable("systems without a common ratio root")
    pair = commensurable_pair(s_ifs.ratio_root, t_ifs.ratio_root)
    if pair is None:
        raise NotComparable("ratio roots are multiplicatively independent")
    m, n = pair
    a = s_ifs.spec.p() ** m
    b = t_ifs.spec.p() ** n
    try:
        return embed_element(a, t_ifs.spec) == b
    except FieldMismatch:
        pass
    # cross-field comparison: b must be a root of the characteristic
    # polynomial of a, in the same isolating interval
    mat = sympy.Matrix([[sympy.Rational(v) for v in row] for row in a.mult_matrix()])
    coeffs = tuple(reversed([Fraction(c) for c in mat.charpoly().all_coeffs()]))
    val = t_ifs.spec.zero()
    pw = t_ifs.spec.one()
    for c in coeffs:
        val = val + pw * c
        pw = pw * b
    if not val.is_zero():
        return False
    ipoly = poly.to_integer(coeffs)
    roots = poly.isolate_real_roots(ipoly)
    return _locate_root(a, roots) == _locate_root(b, roots)


def _locate_root(x, roots):
    """Index of the isolating interval containing the (root) value x."""
    width = Fraction(1, 64)
    while True:
        lo, hi = x.interval(width)
        hits = [
            i for i, (rl, rh) in enumerate(roots) if not (hi < rl or lo > rh)
        ]
        if len(hits) == 1:
            return hits[0]
        width /= 16
