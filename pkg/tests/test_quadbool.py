import itertools
import random

import pytest
from hypothesis import given, strategies as st

from torellicore import quadbool as qb
from torellicore.homlattice import intersection_mod2, mod2_basis

from helpers import form_value_oracle, random_symplectic_basis

a1, a2, a3, b1, b2, b3 = (mod2_basis(n) for n in ("a1", "a2", "a3", "b1", "b2", "b3"))
forms = st.integers(0, 63)
classes = st.integers(0, 63)


@given(forms, classes)
def test_evaluate_matches_quadratic_law_expansion(w, x):
    assert qb.evaluate(w, x) == form_value_oracle(w, x)


@pytest.mark.parametrize("w", [0, 5, 42, 63])
def test_quadratic_law_exhaustive(w):
    assert qb.check_quadratic_law(w)


def test_arf_counts():
    assert qb.arf(0) == 0
    assert len(qb.ALL_FORMS) == 64
    brute = sum(1 for w in range(64) if sum(form_value_oracle(w, 1 << i) * form_value_oracle(w, 8 << i)
                                            for i in range(3)) % 2 == 0)
    assert brute == 36 == qb.NPOINTS


def test_arf_invariant_under_basis_change():
    rng = random.Random(2)
    for _ in range(1000):
        basis = random_symplectic_basis(rng)
        w = rng.randrange(64)
        assert qb.arf_in_basis(w, basis) == qb.arf(w)


def test_dimensions():
    assert qb.dim_Bprime(3) == 35
    assert qb.dim_Bprime() == 36
    assert qb.dim_Bprime(0) == 1


def test_affine_generators_relation():
    for x, y in itertools.product(range(64), repeat=2):
        lhs = qb.affine_generator(x) + qb.affine_generator(y)
        rhs = qb.affine_generator(x ^ y) + qb.constant(intersection_mod2(x, y))
        assert lhs == rhs


@given(st.lists(classes, max_size=5))
def test_idempotency(xs):
    p = qb.product(qb.affine_generator(x) for x in xs)
    assert p * p == p
    assert qb.degree(p) <= len(xs)


def test_degrees_of_monomials():
    assert qb.degree(qb.ZERO) == 0 and qb.degree(qb.ONE) == 0
    assert qb.degree(qb.gen("a1") * qb.gen("a2") * qb.gen("a3")) == 3
    four = qb.gen("a1") * qb.gen("b1") * (qb.gen("a2") + qb.ONE) * qb.gen("b2")
    assert qb.degree(four) == 4
    assert not qb.in_Bk(four, 3) and qb.in_Bk(four, 4)


def test_four_forms_standard_numbering():
    fam = qb.four_forms([a1, a2, a3])
    assert all(qb.evaluate(fam.forms[0], b) == 0 for b in (b1, b2, b3))
    for i in range(4):
        for j, b in enumerate((b1, b2, b3), 1):
            assert qb.evaluate(fam.forms[i], b) == (0 if i in (0, j) else 1)


def test_four_forms_match_exhaustive_filter_on_all_lagrangians():
    seen = 0
    for t in itertools.combinations(range(1, 64), 3):
        try:
            fam = qb.four_forms(list(t))
        except ValueError:
            continue
        seen += 1
        brute = [w for w in range(64) if qb.arf(w) == 0 and all(form_value_oracle(w, a) == 1 for a in t)]
        assert sorted(fam.forms) == brute and len(brute) == 4
    # 135 Lagrangian subspaces mod 2, each with |GL(3, 2)| / 3! = 28 unordered bases
    assert seen == 135 * 28


def test_element_json_roundtrip():
    e = qb.gen("a1") * qb.gen("b2")
    assert qb.BPrimeElement.from_json(e.to_json()) == e
    assert qb.form_from_str(qb.form_to_str(37)) == 37
