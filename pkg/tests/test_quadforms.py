import pytest

from lipfrac.algebra import quadforms as qf


@pytest.mark.parametrize(
    "disc,classes",
    [
        # paper's class-number table: h(O_D) = 1 for D = 2,3,5,6,7,11,13
        (8, 1), (12, 1), (5, 1), (24, 1), (28, 1), (44, 1), (13, 1),
        # h(O_D) = 2 for D = 10, 15, 26
        (40, 2), (60, 2), (104, 2),
    ],
)
def test_wide_class_counts(disc, classes):
    assert len(qf.wide_classes(disc)) == classes


def test_cycles_partition_forms():
    for disc in (40, 60, 160):
        forms = set(qf.reduced_forms(disc))
        cycles = qf.proper_cycles(disc)
        seen = set()
        for c in cycles:
            assert not (c & seen)
            seen |= c
        assert seen == forms


def test_rho_preserves_discriminant_and_cycles():
    for disc in (40, 60):
        for f in qf.reduced_forms(disc):
            g = qf.rho(f)
            assert qf.discriminant(g) == disc
            assert qf.is_reduced(g)


def test_reduce_form_reaches_cycle():
    f = (1, 0, -10)  # disc 40, principal
    r = qf.reduce_form(f)
    assert qf.is_reduced(r)
    assert r in qf.cycle_of((1, 6, -1))


@pytest.mark.parametrize(
    "n,xy",
    [(10, (3, 1)), (2, (1, 1)), (3, (2, 1)), (13, (18, 5)), (61, (29718, 3805))],
)
def test_pell_unit(n, xy):
    x, y = qf.pell_unit(n)
    assert (x, y) == xy
    assert abs(x * x - n * y * y) == 1


@pytest.mark.parametrize(
    "disc,tu",
    [
        (40, (6, 1)),    # 3 + sqrt10, norm -1
        (5, (1, 1)),     # golden ratio
        (160, (38, 3)),  # 19 + 6 sqrt10
        (13, (3, 1)),    # (3 + sqrt13)/2
        (12, (4, 1)),    # 2 + sqrt3, norm +1
    ],
)
def test_fundamental_unit(disc, tu):
    t, u = qf.fundamental_unit(disc)
    assert (t, u) == tu
    assert abs(t * t - disc * u * u) == 4


def test_fundamental_decomposition():
    assert qf.fundamental_decomposition(160) == (40, 2)
    assert qf.fundamental_decomposition(40) == (40, 1)
    assert qf.fundamental_decomposition(12) == (12, 1)
    assert qf.fundamental_decomposition(45) == (5, 3)
    assert qf.intermediate_discriminants(160) == [40, 160]


def test_class_representative_forms_principal_first():
    reps = qf.class_representative_forms(40)
    assert (1, 6, -1) in reps
    assert len(reps) == 2
