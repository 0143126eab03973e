import itertools
import random

import pytest

from torellicore import cyclecomplex as cc
from torellicore.homlattice import HomologyError, add, basis_vector, combo, neg, sub
from torellicore.sampling import random_vertex_set

a1, a2, a3 = (basis_vector(n) for n in ("a1", "a2", "a3"))
X = combo([1, 1, 1], [a1, a2, a3])


def test_vertex_set_examples():
    x = combo([1, 2, 3], [a1, a2, a3])
    assert cc.is_in_H0([x], x)
    assert cc.is_in_H0([a1, a2, a3], x) and cc.is_in_H0prime([a1, a2, a3], x)
    y = add(a1, a2)
    assert cc.is_in_H0([a1, sub(y, a1)], y)
    assert not cc.is_in_H0([a1, neg(a2), a3], X)
    with pytest.raises(HomologyError):
        cc.is_in_H0([a1], combo([2, 2, 0], [a1, a2, a3]))


def test_n_weight_examples():
    assert cc.n_weight([a1, a2, a3], X).n == 3
    n1, n2, n3 = 2, 3, 4
    x = combo([n1, n2, n3], [a1, a2, a3])
    A2 = [sub(a1, a3), a2, a3]
    assert cc.n_weight(A2, x).n == 2 * n1 + n2 + n3 > cc.n_weight([a1, a2, a3], x).n
    with pytest.raises(cc.TaxonomyError):
        cc.n_weight([x], x)


def test_supersets_standard():
    sup = cc.supersets_in_H([a1, a2, a3], X)
    assert len(sup) == len(set(sup)) == 102
    assert sum(cc.FAMILY_COUNTS) >= 102
    for E in sup:
        assert cc.dimension(E) == 3
        assert cc.is_in_M_relative(E, E, X)
    with pytest.raises(cc.TaxonomyError):
        cc.supersets_in_H([a1, a2, neg(a3)], X)


def test_supersets_random_vertex_sets():
    rng = random.Random(3)
    for _ in range(25):
        A, x = random_vertex_set(rng, 20)
        sup = cc.supersets_in_H(A, x)
        assert len(set(sup)) == 102
        assert all(cc.dimension(E) == 3 for E in sup)


def test_is_in_M_relative_examples():
    sup = cc.supersets_in_H([a1, a2, a3], X)
    A = cc.multiset([a1, a2, a3])
    D = next(E for E in sup if cc.is_submultiset(cc.multiset([a1, a2, a3, add(a1, a2)]), E))
    assert cc.is_in_M_relative(A, D, X)
    assert cc.is_in_M_relative(cc.multiset([a1, a2, a3, add(a1, a2)]), D, X)
    with pytest.raises(cc.TaxonomyError):
        cc.is_in_M_relative(cc.multiset([a1, a2, neg(a1)]), A, X)


def test_one_sided_relation_is_excluded():
    C = cc.multiset([a1, a2, a3, neg(add(a1, a2, a3))])
    assert cc.has_one_sided_relation(C)
    assert not cc.satisfies_M_conditions(C, X)


def test_classify_examples():
    t1 = cc.classify(cc.multiset([a1, a2, a3, add(a1, a2, a3)]))
    assert t1.tag == "H1_type1"
    t2 = cc.classify(cc.multiset([a1, a2, a3, add(a1, a2)]))
    assert t2.tag == "H1_type2" and t2.special == a3
    h = cc.classify(cc.multiset([a1, a2, a3, add(a1, a2), add(a1, a2, a3)]))
    assert h.tag == "H2prime" and h.principal == add(a1, a2)
    bp = cc.classify(cc.multiset([a1, a2, a3, a3]))
    assert bp.tag == "H1_boundingpair"


def test_classify_stable_under_permutation_and_flip():
    rng = random.Random(4)
    sup = cc.supersets_in_H([a1, a2, a3], X)
    for E in sup:
        for k in (4, 5):
            for C in itertools.combinations(E, k):
                cls = cc.classify(cc.multiset(C))
                perm = list(C)
                rng.shuffle(perm)
                assert cc.classify(cc.multiset(perm)).tag == cls.tag
                flipped = cc.classify(cc.flip(cc.multiset(C)))
                assert flipped.tag == cls.tag
                if cls.principal is not None:
                    assert flipped.principal == neg(cls.principal)


def test_four_element_faces_are_characterized():
    rng = random.Random(5)
    allowed = {"H1_type1", "H1_type2", "H1_boundingpair"}
    for _ in range(100):
        A, x = random_vertex_set(rng, 20)
        for E in cc.supersets_in_H(A, x):
            for C in set(cc.sub_multisets(E, 4)):
                if cc.dimension(C) == 1:
                    assert cc.classify(C).tag in allowed, C


def test_unique_principal_on_h2prime_members():
    rng = random.Random(6)
    for _ in range(10):
        A, x = random_vertex_set(rng, 20)
        for E in cc.supersets_in_H(A, x):
            for D in set(cc.sub_multisets(E, 5)):
                cls = cc.classify(D)
                if cls.tag == "H2prime":
                    assert cls.principal in D
                    assert len(cls.relations) == 2


def test_fast_h2prime_enumeration_matches_lattice_scan():
    rng = random.Random(7)
    for _ in range(8):
        A, x = random_vertex_set(rng, 20)
        assert sorted(cc.h2prime_containing(A, x)) == cc.h2prime_containing_direct(A, x)


def test_h2prime_cells_through_standard_vertex_set():
    cells = cc.h2prime_supersets_of_vertex_set([a1, a2, a3], X)
    assert len(cells) == 54
    assert all(cc.is_h2prime_cell(D, X) for D in cells)
    assert all(cc.classify(D).tag == "H2prime" for D in cells)


def test_extensions_cover_cells_without_vertex_subset():
    C = cc.multiset([a1, a2, add(a1, a3), add(a2, a3)])
    with pytest.raises(cc.TaxonomyError):
        cc.find_vertex_subset(C, X)
    ext = cc.h2prime_extensions(C, X)
    assert ext and all(cc.is_submultiset(C, D) and cc.is_h2prime_cell(D, X) for D in ext)
    assert cc.is_cell_via_extension(C, X)


def test_extensions_agree_with_direct_enumeration():
    cells = cc.h2prime_supersets_of_vertex_set([a1, a2, a3], X)
    for D in cells:
        for C in set(cc.sub_multisets(D, 4)):
            assert D in cc.h2prime_extensions(C, X)


def test_faces_of_h2prime_cell():
    D = cc.multiset([a1, a2, a3, add(a1, a2), add(a1, a2, a3)])
    fs = cc.faces(D, X)
    assert fs and all(f.dim == 1 for f in fs)
    # four-element faces keep a Lagrangian span and fall in the named types;
    # a three-element face such as {a3, a1+a2, a1+a2+a3} spans rank 2
    for f in fs:
        if len(f.multiset) == 4:
            assert f.tag in {"H1_type1", "H1_type2"}
        else:
            assert len(f.multiset) == 3 and cc.satisfies_M_conditions(f.multiset, X)
    assert any(len(f.multiset) == 3 for f in fs)


def test_multiset_json_roundtrip():
    m = cc.multiset([a2, a1, a1])
    assert cc.multiset_from_json(cc.multiset_to_json(m)) == m
    assert cc.duplicated(m) == a1
