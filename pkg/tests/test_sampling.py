import random

from hypothesis import given, strategies as st

from torellicore import cyclecomplex as cc
from torellicore.homlattice import intersection, intersection_mod2, is_isotropic_direct_summand, mod2
from torellicore import sampling as sa


@given(st.integers(0, 10**6))
def test_random_vertex_set_is_valid(seed):
    A, x = sa.random_vertex_set(random.Random(seed), 12)
    assert cc.is_in_H0prime(A, x)
    assert cc.n_weight(A, x).n <= 12


@given(st.integers(0, 10**6))
def test_transvections_preserve_intersection(seed):
    rng = random.Random(seed)
    vs = [tuple(rng.randint(-3, 3) for _ in range(6)) for _ in range(3)]
    ws = sa.random_symplectic_images(rng, vs)
    for i in range(3):
        for j in range(3):
            assert intersection(ws[i], ws[j]) == intersection(vs[i], vs[j])


def test_coefficients_are_coprime():
    rng = random.Random(1)
    for _ in range(200):
        n = sa.random_coefficients(rng, 15)
        assert min(n) >= 1 and sum(n) <= 15


def test_fixed_x_vertex_sets():
    rng = random.Random(2)
    for _ in range(20):
        A = sa.random_vertex_set_fixed_x(rng)
        assert cc.is_in_H0prime(A, sa.STANDARD_X)


def test_random_lagrangian_mod2_is_isotropic():
    rng = random.Random(3)
    for _ in range(20):
        A = sa.random_lagrangian_mod2(rng)
        assert len(set(A)) == 3 and all(a for a in A)
        assert all(intersection_mod2(a, b) == 0 for a in A for b in A)


def test_standard_data():
    assert cc.is_in_H0prime(sa.STANDARD_A, sa.STANDARD_X)
    assert is_isotropic_direct_summand(sa.STANDARD_A)
    assert [mod2(a) for a in sa.STANDARD_A] == [1, 2, 4]
