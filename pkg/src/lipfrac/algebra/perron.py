"""The companion-style nonnegative matrix attached to the measure relation.

With relation sum_l xi_l p^l = 1 (n = top exponent), the n x n matrix has
first column (xi_1, ..., xi_n) and an upper shift diagonal.  Its
Perron-Frobenius eigenvalue is 1/p with left eigenvector (1, p, ..., p^(n-1));
primitivity holds exactly when gcd of the active exponents is 1 and xi_n > 0.
"""

from fractions import Fraction
from math import gcd

from ..errors import NotMember, NotPositive, NotPrimitiveInput, VerificationFailed
from .numberspec import member_of_Zp


def _mat_mul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


class PerronData:
    def __init__(self, spec, xi_matrix, primitivity_exponent):
        self.spec = spec
        self.xi_matrix = tuple(tuple(row) for row in xi_matrix)
        self.primitivity_exponent = primitivity_exponent

    @property
    def size(self):
        return len(self.xi_matrix)

    def left_vector_p(self):
        p = self.spec.p()
        return [p**i for i in range(self.size)]

    def right_vector_q(self):
        """Exact right eigenvector in Q(beta), normalized to p . q = 1."""
        spec = self.spec
        n = self.size
        beta = spec.beta()
        # kernel of (Xi - beta * Id) over the field
        m = [
            [
                spec.from_rational(self.xi_matrix[i][j]) - (beta if i == j else 0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        # exact Gaussian elimination; kernel is one-dimensional
        piv_cols = []
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if not m[i][c].is_zero()), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][c].inverse()
            m[r] = [v * inv for v in m[r]]
            for i in range(n):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [v - f * w for v, w in zip(m[i], m[r])]
            piv_cols.append(c)
            r += 1
        free = [c for c in range(n) if c not in piv_cols]
        if len(free) != 1:
            raise VerificationFailed("Perron eigenspace is not one-dimensional")
        fc = free[0]
        q = [spec.zero()] * n
        q[fc] = spec.one()
        for i, c in enumerate(piv_cols):
            q[c] = -m[i][fc]
        pvec = self.left_vector_p()
        norm = sum((a * b for a, b in zip(pvec, q)), spec.zero())
        ninv = norm.inverse()
        return [v * ninv for v in q]

    def power_vector(self, vec, k):
        """Xi^k applied to an integer/rational column vector."""
        v = list(vec)
        for _ in range(k):
            v = _mat_vec(self.xi_matrix, v)
        return v


def perron_matrix(spec):
    """Build the matrix and certify primitivity and the eigen-identity."""
    xi = spec.relation_coeffs
    if xi is None:
        raise NotPrimitiveInput("spec carries no measure relation")
    n = len(xi)
    if xi[-1] == 0:
        raise NotPrimitiveInput("top relation coefficient is zero")
    g = 0
    for l, c in enumerate(xi, start=1):
        if c > 0:
            g = gcd(g, l)
    if g != 1:
        raise NotPrimitiveInput(f"gcd of active exponents is {g}")
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][0] = xi[i]
        if i + 1 < n:
            mat[i][i + 1] = 1
    # primitivity exponent: least k with Xi^k > 0 (Wielandt bound caps it)
    cap = (n - 1) * (n - 1) + 2 if n > 1 else 2
    power = mat
    exponent = None
    for k in range(1, cap + 1):
        if all(v > 0 for row in power for v in row):
            exponent = k
            break
        power = _mat_mul(power, mat)
    if exponent is None:
        raise NotPrimitiveInput("matrix is not primitive within the Wielandt bound")
    data = PerronData(spec, mat, exponent)
    # exact eigen-identity p Xi = (1/p) p
    p = spec.p()
    pvec = data.left_vector_p()
    binv = spec.beta()
    for j in range(n):
        lhs = sum((pvec[i] * mat[i][j] for i in range(n)), spec.zero())
        if lhs != pvec[j] * binv:
            raise VerificationFailed("left eigen-identity failed")
    return data


def positive_representation(a, spec=None):
    """Nonnegative integers c with a = sum c_j p^j, exactly.

    Writes a = p^l * (p-vector . a-vector) with an integer vector and pumps
    the vector through the primitive matrix until it is componentwise
    nonnegative (guaranteed by the Perron limit), shifting l as needed.
    """
    spec = spec or a.spec
    if not isinstance(a, type(spec.one())):
        a = spec.from_rational(a)
    if not member_of_Zp(a):
        raise NotMember("not an element of Z[p]")
    if a.sign() <= 0:
        raise NotPositive("positive elements only")
    data = perron_matrix(spec)
    n = data.size
    d = spec.degree
    b = spec.beta()
    y, l = a, 0
    while y.denominator() != 1:
        y, l = y * b, l + 1
    # a = sum c_i beta^(i-l) = sum c_i p^(l-i); vector index d-1-i, base l-d+1
    coords = [int(c) for c in y.coords]
    vec = [0] * n
    for i, c in enumerate(coords):
        vec[d - 1 - i] = c
    base = l - d + 1
    guard = 0
    while base < 0 or any(v < 0 for v in vec):
        vec = _mat_vec(data.xi_matrix, vec)
        base += 1
        guard += 1
        if guard > 10000:
            raise VerificationFailed("positive representation did not stabilize")
    out = [0] * (base + n)
    for j, v in enumerate(vec):
        out[base + j] += v
    while out and out[-1] == 0:
        out.pop()
    if spec.from_p_polynomial(out) != a:
        raise VerificationFailed("positive representation failed re-evaluation")
    return tuple(out)
