"""Ideals of Z[p] = Z[beta, 1/beta] as saturated integer lattices.

An ideal is stored as the row HNF of a full-rank sublattice of Z[beta] over
the power basis of beta.  Saturation (closure under division by beta) makes
the representation canonical: two lattices present the same localized ideal
iff their saturated HNFs are identical.
"""

from fractions import Fraction
from math import gcd

import sympy

from ..errors import (
    DegreeUnsupported,
    NotInIdeal,
    NotMember,
    NotPositive,
    OwnerMismatch,
    VerificationFailed,
    ZeroIdeal,
)
from . import intmatrix as im
from . import quadforms as qf
from .numberspec import FieldElement, member_of_Zp
from .perron import positive_representation


class _Unknown:
    def __repr__(self):
        return "Unknown"

    def __bool__(self):
        raise TypeError("Unknown verdict is not a boolean")


UNKNOWN = _Unknown()


def _beta_matrix(spec):
    """Integer matrix of multiplication by beta (row-vector convention)."""
    d = spec.degree
    rows = []
    for i in range(d - 1):
        rows.append(tuple(1 if j == i + 1 else 0 for j in range(d)))
    rows.append(tuple(int(c) for c in spec._reduction[0]))
    return rows


def _fraction_inverse(m):
    """Exact inverse of a square Fraction matrix."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[c])]
    return [row[n:] for row in a]


def _rows_to_integer(rows):
    den = 1
    for row in rows:
        for v in row:
            d = Fraction(v).denominator
            den = den * d // gcd(den, d)
    out = [tuple(int(Fraction(v) * den) for v in row) for row in rows]
    return out, den


def _intersect_integer_lattices(a_rows, b_rows, ncols):
    """Basis of rowspan(a) ∩ rowspan(b) for integer row lattices."""
    stacked = [list(r) for r in a_rows] + [list(-x for x in r) for r in b_rows]
    ker = im.kernel(stacked, ncols)
    na = len(a_rows)
    rows = []
    for k in ker:
        rows.append(
            tuple(
                sum(k[i] * a_rows[i][j] for i in range(na)) for j in range(ncols)
            )
        )
    return im.hnf(rows, ncols)


class IdealLattice:
    """Full-rank sublattice of Z[beta], closed under multiplication by beta."""

    __slots__ = ("spec", "hnf", "saturated", "sat_steps")

    def __init__(self, spec, hnf_rows, saturated=False, sat_steps=0):
        self.spec = spec
        self.hnf = tuple(tuple(int(v) for v in row) for row in hnf_rows)
        self.saturated = saturated
        self.sat_steps = sat_steps
        if len(self.hnf) != spec.degree:
            raise ZeroIdeal("lattice is not full rank")

    @classmethod
    def from_integer_rows(cls, spec, rows, saturate=True):
        h = im.hnf([list(r) for r in rows], spec.degree)
        lat = cls(spec, h)
        return lat.saturate() if saturate else lat

    @classmethod
    def whole_ring(cls, spec):
        return cls(spec, im.identity(spec.degree), saturated=True)

    def covolume(self):
        out = 1
        for i, row in enumerate(self.hnf):
            out *= row[i]
        return out

    def basis_elements(self):
        return [self.spec.element(row) for row in self.hnf]

    def beta_colon(self):
        """(I : beta) ∩ Z[beta] = {x integral : beta * x in I}."""
        d = self.spec.degree
        mb = _beta_matrix(self.spec)
        stacked = [list(mb[i]) for i in range(d)] + [
            [-v for v in row] for row in self.hnf
        ]
        ker = im.kernel(stacked, d)
        rows = [tuple(k[:d]) for k in ker]
        h = im.hnf(rows, d)
        return IdealLattice(self.spec, h)

    def saturate(self):
        cur, steps = self, 0
        while True:
            nxt = cur.beta_colon()
            if nxt.hnf == cur.hnf:
                return IdealLattice(self.spec, cur.hnf, saturated=True,
                                    sat_steps=steps)
            cur, steps = nxt, steps + 1

    def member(self, x):
        """Membership of a field element; localized semantics when saturated."""
        if not isinstance(x, FieldElement):
            x = self.spec.from_rational(x)
        if x.spec != self.spec:
            raise OwnerMismatch("element belongs to a different spec")
        if not member_of_Zp(x):
            return False
        b = self.spec.beta()
        y = x
        guard = 0
        while y.denominator() != 1:
            y = y * b
            guard += 1
            if guard > 4 * self.spec.degree * (1 + len(str(x.denominator()))):
                return False
        if y.denominator() != 1 and not self.saturated:
            raise ValueError("unsaturated lattice only tests integral elements")
        return im.lattice_member(self.hnf, tuple(int(c) for c in y.coords))

    def scale_by_integral(self, c):
        """Lattice c * I for c with integer coordinates."""
        rows = []
        for e in self.basis_elements():
            v = e * c
            rows.append(tuple(int(x) for x in v.coords))
        return IdealLattice.from_integer_rows(self.spec, rows, saturate=False)

    def reduce_vector(self, vec):
        """Canonical representative of an integer vector modulo the lattice."""
        t = list(int(v) for v in vec)
        d = len(t)
        for i, row in enumerate(self.hnf):
            c = next(j for j in range(d) if row[j] != 0)
            q = t[c] // row[c]
            if q:
                t = [t[j] - q * row[j] for j in range(d)]
        return tuple(t)

    def multiplier_order_rows(self):
        """HNF rows of the multiplier order {x in K : x*I ⊆ I}."""
        d = self.spec.degree
        cur = None
        for g in self.basis_elements():
            minv = _fraction_inverse(g.mult_matrix())
            rows = [
                [sum(Fraction(self.hnf[i][k]) * minv[k][j] for k in range(d))
                 for j in range(d)]
                for i in range(d)
            ]
            rows_int, den = _rows_to_integer(rows)
            if cur is None:
                cur = (im.hnf(rows_int, d), den)
            else:
                a_rows, a_den = cur
                lcm = a_den * den // gcd(a_den, den)
                a_sc = [tuple(v * (lcm // a_den) for v in r) for r in a_rows]
                b_sc = [tuple(v * (lcm // den) for v in r) for r in rows_int]
                cur = (_intersect_integer_lattices(a_sc, b_sc, d), lcm)
        rows, den = cur
        # multiplier order contains 1; rescale back to unit denominator
        out = [tuple(Fraction(v, den) for v in row) for row in rows]
        return out

    def multiplier_discriminant(self):
        """Discriminant of the multiplier order (degree 2 only)."""
        if self.spec.degree != 2:
            raise DegreeUnsupported("multiplier discriminant needs degree 2")
        rows = self.multiplier_order_rows()
        rows_int, den = _rows_to_integer(rows)
        h = im.hnf(rows_int, 2)
        # basis {h0/den, h1/den}; with 1 in the order, h0/den = (1, 0)
        scale = Fraction(h[1][1], den)
        t = self.spec.beta_trace_coeff()
        n = self.spec.beta_norm()
        return int((t * t - 4 * n) * scale * scale)

    def __eq__(self, other):
        return (
            isinstance(other, IdealLattice)
            and self.spec == other.spec
            and self.hnf == other.hnf
        )

    def __hash__(self):
        return hash((self.spec, self.hnf))

    def __repr__(self):
        return f"IdealLattice({self.hnf}, saturated={self.saturated})"

    def serialize(self):
        return {
            "beta_min_poly": [int(c) for c in self.spec.beta_min_poly],
            "hnf": [[int(v) for v in row] for row in self.hnf],
            "saturated": self.saturated,
        }


def ideal_hnf(generators, spec):
    """Canonical saturated HNF lattice of the Z[p]-ideal the generators span."""
    gens = []
    for g in generators:
        if not isinstance(g, FieldElement):
            g = spec.from_rational(g)
        if g.spec != spec:
            raise OwnerMismatch("generator belongs to a different spec")
        if not g.is_zero():
            gens.append(g)
    if not gens:
        raise ZeroIdeal("all generators are zero")
    for g in gens:
        if not member_of_Zp(g):
            raise NotMember(f"generator {g} is not in Z[p]")
    b = spec.beta()
    rows = []
    for g in gens:
        while g.denominator() != 1:
            g = g * b
        cur = g
        for _ in range(spec.degree):
            rows.append(tuple(int(c) for c in cur.coords))
            cur = cur * b
    return IdealLattice.from_integer_rows(spec, rows, saturate=True)


def saturate(lattice):
    return lattice.saturate()


def colon_lattice(i_lat, j_lat):
    """(I : J) = {x in K : x*J ⊆ I} as (integer HNF rows, denominator)."""
    spec = i_lat.spec
    d = spec.degree
    cur = None
    for g in j_lat.basis_elements():
        minv = _fraction_inverse(g.mult_matrix())
        rows = [
            [sum(Fraction(i_lat.hnf[i][k]) * minv[k][j] for k in range(d))
             for j in range(d)]
            for i in range(d)
        ]
        rows_int, den = _rows_to_integer(rows)
        if cur is None:
            cur = (im.hnf(rows_int, d), den)
        else:
            a_rows, a_den = cur
            lcm = a_den * den // gcd(a_den, den)
            a_sc = [tuple(v * (lcm // a_den) for v in r) for r in a_rows]
            b_sc = [tuple(v * (lcm // den) for v in r) for r in rows_int]
            cur = (_intersect_integer_lattices(a_sc, b_sc, d), lcm)
    return cur


def _conjugate_abs_upper(x, root_iv, width=Fraction(1, 64)):
    lo, hi = x.conjugate_interval(root_iv, width)
    return max(abs(lo), abs(hi))


def same_class(i_lat, j_lat, t_window=6, enum_cap=4_000_000):
    """Decide whether I and J lie in the same ideal class of Z[p].

    Exact for degree <= 2: candidates for the scaling element live in the
    colon lattice (I_sat : J_sat); their norms are fixed up to the index
    swallowed by saturation (a divisor of |N(beta)|^t for a small window of
    t); the enumeration is complete modulo the fundamental unit.  Degree >= 3
    falls back to a bounded search and may return UNKNOWN.

    Returns (verdict, scaling) where scaling is a FieldElement witness for
    True verdicts.
    """
    if i_lat.spec != j_lat.spec:
        raise OwnerMismatch("ideals of different specs")
    spec = i_lat.spec
    i_sat = i_lat if i_lat.saturated else i_lat.saturate()
    j_sat = j_lat if j_lat.saturated else j_lat.saturate()
    if i_sat.hnf == j_sat.hnf:
        return True, spec.one()
    d = spec.degree
    if d == 1:
        c = Fraction(i_sat.covolume(), j_sat.covolume())
        return True, spec.from_rational(c)

    c_rows, c_den = colon_lattice(i_sat, j_sat)
    istar = i_sat.scale_by_integral(spec.from_rational(c_den)).saturate()

    if d > 2:
        for row in c_rows:
            cand = spec.element(row)
            if cand.is_zero():
                continue
            if _scaled_matches(cand, j_sat, istar):
                return True, cand / c_den
        return UNKNOWN, None

    ratio = Fraction(istar.covolume(), j_sat.covolume())
    nbeta = abs(spec.beta_norm())
    if nbeta == 1:
        ks = [1]
    else:
        ks = sorted(sympy.divisors(nbeta**t_window))
    t = spec.beta_trace_coeff()
    n = spec.beta_norm()
    disc = t * t - 4 * n
    tu = qf.fundamental_unit(disc)
    _, eps_hi = qf.unit_value_bounds(disc, *tu)

    e1 = spec.element(c_rows[0])
    e2 = spec.element(c_rows[1])
    conj = spec.real_conjugate_intervals()
    s_upper = [
        [_conjugate_abs_upper(e, iv) for iv in conj] for e in (e1, e2)
    ]
    detg = c_rows[0][0] * c_rows[1][1] - c_rows[0][1] * c_rows[1][0]
    sq_lo, _ = qf.sqrt_bounds(disc)
    det_lo = abs(detg) * sq_lo
    if det_lo == 0:
        det_lo = abs(detg) * Fraction(1, 2)

    # exact norm form on the colon basis
    n_e1, n_e2 = e1.norm(), e2.norm()
    a1, b1 = e1.coords
    a2, b2 = e2.coords
    tr_mixed = 2 * a1 * a2 + t * (a1 * b2 + a2 * b1) + 2 * n * b1 * b2

    for k in ks:
        m = ratio * k
        _, u_hi = qf.sqrt_bounds(m * eps_hi)
        ubound = (u_hi * (s_upper[1][0] + s_upper[1][1])) / det_lo
        vbound = (u_hi * (s_upper[0][0] + s_upper[0][1])) / det_lo
        umax = int(ubound) + 1
        vmax = int(vbound) + 1
        if (2 * umax + 1) * (2 * vmax + 1) > enum_cap:
            raise VerificationFailed("scaling enumeration exceeds cap")
        for u in range(-umax, umax + 1):
            for v in range(0, vmax + 1):
                if u == 0 and v == 0:
                    continue
                if v == 0 and u < 0:
                    continue  # -c equivalent to c
                nm = n_e1 * u * u + tr_mixed * u * v + n_e2 * v * v
                if abs(nm) != m:
                    continue
                cand = spec.element(
                    (u * a1 + v * a2, u * b1 + v * b2)
                )
                if _scaled_matches(cand, j_sat, istar):
                    return True, cand / c_den
    return False, None


def _scaled_matches(cand_int, j_sat, istar):
    scaled = j_sat.scale_by_integral(cand_int).saturate()
    return scaled.hnf == istar.hnf


def is_principal(i_lat, **kw):
    verdict, scaling = same_class(i_lat, IdealLattice.whole_ring(i_lat.spec), **kw)
    return verdict, scaling


def ideal_class_form(lat):
    """Primitive integral form of an (unsaturated) Z[beta]-lattice, with the
    basis oriented by the real embeddings; degree 2 only."""
    spec = lat.spec
    if spec.degree != 2:
        raise DegreeUnsupported("form attachment needs degree 2")
    rows = [list(r) for r in lat.hnf]
    detg = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # orientation: det(G) * (beta - beta') with beta the spec's root;
    # beta - beta' = 2*beta - T has the sign of its interval
    t = spec.beta_trace_coeff()
    two_beta_minus_t = spec.element((Fraction(-t), Fraction(2)))
    if detg * two_beta_minus_t.sign() < 0:
        rows = [rows[1], rows[0]]
    g1, g2 = spec.element(rows[0]), spec.element(rows[1])
    n = spec.beta_norm()
    a1, b1 = g1.coords
    a2, b2 = g2.coords
    fa = int(g1.norm())
    fc = int(g2.norm())
    fb = int(2 * a1 * a2 + t * (a1 * b2 + a2 * b1) + 2 * n * b1 * b2)
    content = gcd(gcd(abs(fa), abs(fb)), abs(fc))
    return (fa // content, fb // content, fc // content)


def same_class_order(i_lat, j_lat):
    """Ideal-class equality in the order Z[beta] itself (no localization).

    Exact for degree <= 2 via the reduced-form cycle correspondence; the
    merge under (-a, b, -c) realizes scaling by negative-norm elements.
    """
    if i_lat.spec != j_lat.spec:
        raise OwnerMismatch("ideals of different specs")
    if i_lat.spec.degree == 1:
        return True
    if i_lat.spec.degree != 2:
        raise DegreeUnsupported("order-class decision needs degree <= 2")
    if i_lat.multiplier_discriminant() != j_lat.multiplier_discriminant():
        return False
    fi = ideal_class_form(i_lat)
    fj = ideal_class_form(j_lat)
    cyc = qf.cycle_of(fj)
    a, b, c = fj
    cyc = cyc | qf.cycle_of((-a, b, -c))
    return qf.reduce_form(fi) in cyc


def is_principal_order(i_lat):
    return same_class_order(i_lat, IdealLattice.whole_ring(i_lat.spec))


def class_representatives(spec):
    """One ideal lattice per ideal class of Z[beta] (all multiplier orders)."""
    if spec.degree == 1:
        return [IdealLattice.whole_ring(spec)]
    if spec.degree != 2:
        raise DegreeUnsupported("class enumeration implemented for degree <= 2")
    t = spec.beta_trace_coeff()
    n = spec.beta_norm()
    disc = t * t - 4 * n
    reps = []
    for dprime in qf.intermediate_discriminants(disc):
        scale2 = Fraction(dprime, disc)
        num, den = scale2.numerator, scale2.denominator
        s = Fraction(sympy.integer_nthroot(num, 2)[0], sympy.integer_nthroot(den, 2)[0])
        for a, b, _c in qf.class_representative_forms(dprime):
            # ideal Z a + Z (-b + sqrt(dprime)) / 2, sqrt(disc) = 2 beta - t
            e = (Fraction(-b, 2) - s * Fraction(t, 2), s)
            rows = [(Fraction(a), Fraction(0)), e]
            rows_int, _den = _rows_to_integer(rows)
            lat = IdealLattice.from_integer_rows(spec, rows_int, saturate=False)
            reps.append(lat)
    return reps


def class_number_order(spec):
    """Number of ideal classes of Z[beta] = Z[1/p] (paper counting: all
    nonzero ideals, equivalence aI = bJ)."""
    if spec.degree == 1:
        return 1
    if spec.degree != 2:
        raise DegreeUnsupported("exact class numbers implemented for degree <= 2")
    t = spec.beta_trace_coeff()
    n = spec.beta_norm()
    disc = t * t - 4 * n
    return sum(len(qf.wide_classes(dp)) for dp in qf.intermediate_discriminants(disc))


def class_number_localized(spec):
    """Number of ideal classes of Z[p] = Z[beta, 1/beta]."""
    if spec.degree == 1:
        return 1
    if spec.degree != 2:
        raise DegreeUnsupported("exact class numbers implemented for degree <= 2")
    reps = [r.saturate() for r in class_representatives(spec)]
    classes = []
    for r in reps:
        for cls in classes:
            verdict, _ = same_class(cls, r)
            if verdict is True:
                break
        else:
            classes.append(r)
    return len(classes)


def find_unipotent_level(i_lat):
    """Least l >= 1 with 1 - p^l in the (localized) ideal.

    Equivalently the multiplicative order of beta in the finite quotient
    Z[beta]/I_sat; termination by pigeonhole since beta acts invertibly on
    the saturated quotient.
    """
    lat = i_lat if i_lat.saturated else i_lat.saturate()
    spec = lat.spec
    mb = _beta_matrix(spec)
    one = lat.reduce_vector(tuple(1 if i == 0 else 0 for i in range(spec.degree)))
    v = one
    cap = abs(lat.covolume()) + 2
    for level in range(1, cap * cap + 2):
        v = lat.reduce_vector(
            tuple(
                sum(v[i] * mb[i][j] for i in range(spec.degree))
                for j in range(spec.degree)
            )
        )
        if v == one:
            return level
    raise VerificationFailed("unipotent level search did not terminate")


def _solve_any_combination(gens, target, spec, k_extra=24):
    """Integer data expressing target = sum g_i b_i with b_i in Z[p]."""
    b = spec.beta()
    d = spec.degree
    cleared = []
    for g in gens:
        k = 0
        while g.denominator() != 1:
            g, k = g * b, k + 1
        cleared.append((g, k))
    rows = []
    index = []
    for i, (g, _k) in enumerate(cleared):
        cur = g
        for j in range(d):
            rows.append([int(c) for c in cur.coords])
            index.append((i, j))
            cur = cur * b
    tgt = target
    kt = 0
    while tgt.denominator() != 1:
        tgt, kt = tgt * b, kt + 1
    for kextra in range(k_extra):
        t_int = tuple(int(c) for c in tgt.coords)
        sol = im.solve_left(rows, d, t_int)
        if sol is not None:
            ker = im.kernel(rows, d)
            return rows, index, cleared, sol, ker, kt + kextra
        tgt = tgt * b
    raise NotInIdeal("no integral combination found within the beta budget")


def _solution_to_elements(sol, index, cleared, total_k, spec):
    b = spec.beta()
    binv = b.inverse()
    out = []
    for i, (_g, ki) in enumerate(cleared):
        acc = spec.zero()
        pw = spec.one()
        for j in range(spec.degree):
            coeff = sol[index.index((i, j))] if (i, j) in index else 0
            acc = acc + pw * coeff
            pw = pw * b
        shift = ki - total_k
        acc = acc * (b if shift >= 0 else binv) ** abs(shift)
        out.append(acc)
    return out


def _rep_length(x):
    """Total coefficient mass of the positive representation, or None."""
    try:
        rep = positive_representation(x, x.spec)
    except (NotPositive, NotMember, VerificationFailed):
        return None
    return sum(rep)


def positive_combination(generators, target, spec):
    """Positive b_i in Z[p] with target = sum a_i b_i, following the
    inductive repair of the ideal-combination lemma."""
    gens = [
        g if isinstance(g, FieldElement) else spec.from_rational(g)
        for g in generators
    ]
    if not isinstance(target, FieldElement):
        target = spec.from_rational(target)
    for g in gens:
        if g.sign() <= 0:
            raise NotPositive("generators must be positive")
    if target.sign() <= 0:
        raise NotPositive("target must be positive")
    lat = ideal_hnf(gens, spec)
    if not lat.member(target):
        raise NotInIdeal("target is outside the generated ideal")

    result = _positive_combination_rec(gens, target, spec)
    acc = spec.zero()
    for g, b in zip(gens, result):
        acc = acc + g * b
    if acc != target or any(b.sign() <= 0 for b in result):
        raise VerificationFailed("positive combination failed verification")
    return tuple(result)


def _positive_combination_rec(gens, target, spec):
    m = len(gens)
    if m == 1:
        b = target / gens[0]
        if not member_of_Zp(b):
            raise NotInIdeal("target not in the principal ideal")
        return [b]
    rows, index, cleared, sol, ker, total_k = _solve_any_combination(
        gens, target, spec
    )
    best = _search_positive_solution(
        rows, index, cleared, sol, ker, total_k, gens, spec
    )
    if best is not None:
        return best
    bs = _solution_to_elements(sol, index, cleared, total_k, spec)
    # ensure the last coefficient is positive, preserving the sum
    if bs[-1].sign() <= 0:
        g1, gm = gens[0], gens[-1]
        step = 1
        while (bs[-1] + step * g1).sign() <= 0:
            step *= 2
        bs[-1] = bs[-1] + step * g1
        bs[0] = bs[0] - step * gm
    sub = gens[:-1]
    level = find_unipotent_level(ideal_hnf(sub, spec))
    p = spec.p()
    k = 1
    while True:
        shrink = p ** (k * level)
        new_target = target - gens[-1] * bs[-1] * shrink
        if new_target.sign() > 0:
            break
        k *= 2
    rest = _positive_combination_rec(sub, new_target, spec)
    return rest + [bs[-1] * shrink]


def _search_positive_solution(rows, index, cleared, sol, ker, total_k, gens,
                              spec, radius=8):
    """Scan small kernel shifts of one particular solution for all-positive
    coefficient vectors; pick the one with the shortest positive
    representations (reproduces the compact textbook combinations)."""
    if len(ker) > 2:
        radius = 2
    shifts = [()]
    for kvec in ker:
        shifts = [s + (t,) for s in shifts for t in range(-radius, radius + 1)]
    best = None
    best_len = None
    for s in shifts:
        cand = list(sol)
        for t, kvec in zip(s, ker):
            if t:
                cand = [c + t * kv for c, kv in zip(cand, kvec)]
        bs = _solution_to_elements(cand, index, cleared, total_k, spec)
        if any(b.sign() <= 0 for b in bs):
            continue
        lens = [_rep_length(b) for b in bs]
        if any(ln is None for ln in lens):
            continue
        total = sum(lens)
        if best_len is None or total < best_len:
            best, best_len = bs, total
    return best
