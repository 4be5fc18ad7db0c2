"""Integer row-lattice utilities: HNF, kernels, exact linear solves.

Matrices are lists/tuples of row tuples.  Row convention throughout: a
lattice is the set of integer combinations of its rows.
"""

from math import gcd


def xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else []
    return [
        [sum(x * y for x, y in zip(row, col)) for col in bt] + [0] * (0 if b else cols)
        for row in a
    ]


def hnf_with_transform(rows, ncols):
    """Row Hermite normal form.

    Returns (H, U, rank) with U unimodular, U * rows == H padded by zero rows;
    H has `rank` nonzero rows with strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into [0, pivot).
    """
    a = [list(r) for r in rows]
    n = len(a)
    u = identity(n)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        for i in range(piv + 1, n):
            if a[i][c] == 0:
                continue
            g, x, y = xgcd(a[piv][c], a[i][c])
            p_, q_ = -(a[i][c] // g), a[piv][c] // g
            a[piv], a[i] = (
                [x * a[piv][j] + y * a[i][j] for j in range(ncols)],
                [p_ * a[piv][j] + q_ * a[i][j] for j in range(ncols)],
            )
            u[piv], u[i] = (
                [x * u[piv][j] + y * u[i][j] for j in range(n)],
                [p_ * u[piv][j] + q_ * u[i][j] for j in range(n)],
            )
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
            u[r] = [-v for v in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [a[i][j] - q * a[r][j] for j in range(ncols)]
                u[i] = [u[i][j] - q * u[r][j] for j in range(n)]
        r += 1
    h = [tuple(row) for row in a[:r]]
    return h, [tuple(row) for row in u], r


def hnf(rows, ncols):
    return hnf_with_transform(rows, ncols)[0]


def kernel(rows, ncols):
    """Basis of the left kernel {x : x * rows == 0}."""
    _, u, rank = hnf_with_transform(rows, ncols)
    return [u[i] for i in range(rank, len(u))]


def solve_left(rows, ncols, target):
    """An integer x with x * rows == target, or None."""
    h, u, rank = hnf_with_transform(rows, ncols)
    t = list(target)
    z = [0] * len(rows)
    for i in range(rank):
        c = next(j for j in range(ncols) if h[i][j] != 0)
        if t[c] % h[i][c] != 0:
            return None
        q = t[c] // h[i][c]
        z[i] = q
        if q:
            t = [t[j] - q * h[i][j] for j in range(ncols)]
    if any(t):
        return None
    n = len(rows)
    return tuple(sum(z[i] * u[i][j] for i in range(n)) for j in range(n))


def lattice_member(h, vec):
    """Membership of an integer vector in the lattice spanned by HNF rows h."""
    t = list(vec)
    ncols = len(vec)
    for row in h:
        c = next((j for j in range(ncols) if row[j] != 0), None)
        if c is None:
            continue
        if t[c] % row[c] != 0:
            return False
        q = t[c] // row[c]
        if q:
            t = [t[j] - q * row[j] for j in range(ncols)]
    return not any(t)


def lattice_index_denominator(rows):
    """lcm of denominators when rows hold Fractions; helper for scaling."""
    den = 1
    for row in rows:
        for v in row:
            d = getattr(v, "denominator", 1)
            den = den * d // gcd(den, d)
    return den
