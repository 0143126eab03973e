import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from torellicore import homlattice as hl
from torellicore.homlattice import basis_vector as e

a1, a2, a3, b1, b2, b3 = (e(n) for n in hl.BASIS_NAMES)
hc = st.tuples(*[st.integers(-6, 6)] * hl.RANK)


def test_intersection_examples():
    assert hl.intersection(a1, b1) == 1
    assert hl.intersection(a1, a2) == 0
    u = hl.add(hl.scale(2, a1), b2)
    v = hl.sub(hl.scale(3, b1), a2)
    assert hl.intersection(u, v) == 7


@given(hc, hc, hc, st.integers(-4, 4))
def test_intersection_antisymmetric_bilinear(u, v, w, k):
    assert hl.intersection(u, v) == -hl.intersection(v, u)
    assert hl.intersection(hl.add(u, hl.scale(k, w)), v) == hl.intersection(u, v) + k * hl.intersection(w, v)


def test_intersection_on_random_pairs():
    rng = random.Random(0)
    for _ in range(10_000):
        u = tuple(rng.randint(-9, 9) for _ in range(6))
        v = tuple(rng.randint(-9, 9) for _ in range(6))
        assert hl.intersection(u, v) == -hl.intersection(v, u)
        assert hl.intersection(u, u) == 0


def test_is_primitive():
    assert hl.is_primitive(hl.add(a1, hl.scale(2, a2)))
    assert not hl.is_primitive(hl.add(hl.scale(2, a1), hl.scale(2, a2)))
    assert hl.is_primitive(hl.combo([6, 10, 15], [a1, a2, a3]))
    with pytest.raises(hl.HomologyError, match="zero class"):
        hl.is_primitive(hl.ZERO)


def test_isotropic_direct_summand_examples():
    assert hl.is_isotropic_direct_summand([a1, a2, a3])
    assert not hl.is_isotropic_direct_summand([a1, hl.scale(2, a2)])
    assert hl.is_isotropic_direct_summand([hl.add(a1, a2), hl.sub(a2, a3), a3])
    assert not hl.is_isotropic_direct_summand([a1, b1])
    with pytest.raises(hl.HomologyError):
        hl.is_isotropic_direct_summand([a1, a2, a3, b1])


def snf_oracle(S):
    if any(hl.intersection(u, v) for u, v in itertools.combinations(S, 2)):
        return False
    M = sympy.Matrix([list(v) for v in S])
    if M.rank() < len(S):
        return False
    D = smith_normal_form(M, domain=sympy.ZZ)
    return all(abs(D[i, i]) == 1 for i in range(len(S)))


def test_direct_summand_matches_smith_form_oracle():
    rng = random.Random(1)
    for k in range(1000):
        if k % 2:
            S = [tuple(rng.randint(-5, 5) for _ in range(6)) for _ in range(3)]
        else:
            S = [hl.combo([rng.randint(-5, 5) for _ in range(3)], [a1, a2, a3]) for _ in range(3)]
        assert hl.is_isotropic_direct_summand(S) == snf_oracle(S), S


@given(st.lists(hc, min_size=1, max_size=3), hc)
def test_solve_rational_matches_sympy(vs, target):
    sol = hl.solve_rational(vs, target)
    M = sympy.Matrix([list(v) for v in vs]).T
    t = sympy.Matrix(list(target))
    independent = M.rank() == len(vs)
    consistent = M.rank() == M.row_join(t).rank()
    if not (independent and consistent):
        assert sol is None
        return
    assert sol is not None
    assert all(isinstance(c, Fraction) for c in sol)
    assert [sum(c * v[i] for c, v in zip(sol, vs)) for i in range(6)] == list(target)


def test_maximal_minor_gcd():
    assert hl.maximal_minor_gcd([a1, a2]) == 1
    assert hl.maximal_minor_gcd([a1, hl.scale(3, a2)]) == 3


def test_complete_symplectic_mod2_standard():
    A = [hl.mod2(v) for v in (a1, a2, a3)]
    assert hl.complete_symplectic_mod2(A) == tuple(hl.mod2(v) for v in (a1, a2, a3, b1, b2, b3))


def test_complete_symplectic_mod2_errors():
    A = [hl.mod2(v) for v in (a1, b1, a2)]
    with pytest.raises(hl.HomologyError):
        hl.complete_symplectic_mod2(A)
    with pytest.raises(hl.HomologyError):
        hl.complete_symplectic_mod2([hl.mod2(a1), hl.mod2(a1), hl.mod2(a2)])


def lagrangian_triples():
    """All mod-2 triples that are independent and pairwise orthogonal, by brute force."""
    out = []
    for t in itertools.combinations(range(1, 64), 3):
        if hl.mod2_independent(t) and all(hl.intersection_mod2(u, v) == 0 for u, v in itertools.combinations(t, 2)):
            out.append(t)
    return out


def test_every_completion_satisfies_gram_conditions():
    triples = lagrangian_triples()
    assert triples
    for t in triples:
        basis = hl.complete_symplectic_mod2(list(t))
        assert basis[:3] == t
        assert hl.check_symplectic_basis(basis)
        for i in range(3):
            for j in range(3):
                assert hl.intersection_mod2(basis[i], basis[3 + j]) == (i == j)
                assert hl.intersection_mod2(basis[i], basis[j]) == 0
                assert hl.intersection_mod2(basis[3 + i], basis[3 + j]) == 0


def test_mod2_string_roundtrip():
    for u in range(64):
        assert hl.mod2_from_str(hl.mod2_to_str(u)) == u
    assert hl.mod2_name(hl.mod2(hl.add(a1, b3))) == "a1+b3"
    with pytest.raises(hl.HomologyError):
        hl.mod2_from_str("0102")


def test_hclass_json_roundtrip():
    u = hl.hclass(1, -2, 3, 0, 0, 5)
    assert hl.hclass_from_json(hl.hclass_to_json(u)) == u
