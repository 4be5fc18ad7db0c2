from fractions import Fraction

import pytest

from lipfrac.errors import NotPositive, NotPrimitiveInput
from lipfrac.algebra.numberspec import measure_root
from lipfrac.algebra.perron import perron_matrix, positive_representation


def test_perron_matrix_npi():
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    pd = perron_matrix(s)
    assert pd.xi_matrix == ((6, 1), (1, 0))
    assert pd.primitivity_exponent == 2


def test_perron_matrix_not_primitive():
    s = measure_root([2, 2], allow_gcd_violation=True)
    with pytest.raises(NotPrimitiveInput):
        perron_matrix(s)


def test_perron_matrix_sparse_relation():
    # lambda = {1, 3}: xi = (1, 0, 1); primitive by gcd(1,3) = 1
    s = measure_root([1, 3])
    pd = perron_matrix(s)
    assert pd.xi_matrix == ((1, 1, 0), (0, 0, 1), (1, 0, 0))
    m = [row[:] for row in ([list(r) for r in pd.xi_matrix])]
    power = m
    for _ in range(pd.primitivity_exponent - 1):
        power = [
            [sum(a * b for a, b in zip(row, col)) for col in zip(*m)]
            for row in power
        ]
    assert all(v > 0 for row in power for v in row)


def test_left_eigen_identity():
    s = measure_root([1, 3])
    pd = perron_matrix(s)
    pvec = pd.left_vector_p()
    beta = s.beta()
    n = pd.size
    for j in range(n):
        lhs = sum((pvec[i] * pd.xi_matrix[i][j] for i in range(n)), s.zero())
        assert lhs == pvec[j] * beta


def test_right_vector_normalized():
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    pd = perron_matrix(s)
    q = pd.right_vector_q()
    total = sum((a * b for a, b in zip(pd.left_vector_p(), q)), s.zero())
    assert total == 1
    # eigen equation Xi q = beta q
    n = pd.size
    for i in range(n):
        lhs = sum((q[j] * pd.xi_matrix[i][j] for j in range(n)), s.zero())
        assert lhs == q[i] * s.beta()


def test_perron_power_convergence_monotone():
    """p^k Xi^k a -> (p . a) q with interval error shrinking (k <= 60)."""
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    pd = perron_matrix(s)
    q = pd.right_vector_q()
    p = s.p()
    a = [3, -2]
    pa = sum((x * y for x, y in zip(pd.left_vector_p(), a)), s.zero())
    limit = [pa * qi for qi in q]
    prev = None
    vec = a
    for k in range(1, 61):
        vec = pd.power_vector(vec, 1)
        scale = p**k
        errs = []
        for i in range(pd.size):
            diff = scale * vec[i] - limit[i]
            lo, hi = diff.interval(Fraction(1, 10 ** (2 * k + 20)))
            errs.append(max(abs(lo), abs(hi)))
        cur = max(errs)
        if prev is not None and k > 3:
            assert cur <= prev
        prev = cur
    assert prev < Fraction(1, 10**20)


@pytest.mark.parametrize(
    "build,expected",
    [
        (lambda s: 1 - s.p(), (0, 5, 1)),  # 1 - p = 5p + p^2
        (lambda s: s.one(), (1,)),
    ],
)
def test_positive_representation_known(build, expected):
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    assert positive_representation(build(s), s) == expected


def test_positive_representation_iterated():
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    p = s.p()
    a = 2 - 11 * p
    rep = positive_representation(a, s)
    assert all(c >= 0 for c in rep)
    assert s.from_p_polynomial(rep) == a


def test_positive_representation_rejects_negative():
    s = measure_root([1, 1, 1, 1, 1, 1, 2])
    with pytest.raises(NotPositive):
        positive_representation(s.p() - 1, s)
