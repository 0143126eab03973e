import random

import pytest

from torellicore import bcj, chainlab as cl, cyclecomplex as cc
from torellicore.homlattice import add, mod2
from torellicore.quadbool import ZERO

a1, a2, a3 = (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)
X = add(a1, a2, a3)
STD = (a1, a2, a3)
D5 = cc.multiset([a1, a2, a3, add(a1, a2), X])


def instance(label_prefix, D=D5):
    return next(i for i in cl.instances_for_cell(D, X) if i.label.startswith(label_prefix))


def bp_cell():
    return next(D for D in cl.two_cells_over(STD, X) if cc.classify(D).tag == "H2_boundingpair")


# ---------------------------------------------------------------- terms and chains

def test_term_validation():
    comps = (("p", a1), ("q", a2), ("r", a3), ("s", X))
    g = bcj.sep_twist([(mod2(a1), mod2((0, 0, 0, 1, 0, 0)))])
    cl.make_term(comps, (g,))
    with pytest.raises(cl.ChainError):
        cl.make_term(comps, (g,), orbit_sign=1)
    comps2 = (("p", a1), ("q", a2), ("r", a3), ("s", add(a1, a2)))
    with pytest.raises(cl.ChainError):
        cl.make_term(comps2, (g,))
    with pytest.raises(cl.ChainError):
        cl.make_term((("p", a1), ("p", a2), ("r", a3), ("s", X)), (g,))


def test_zero_chain():
    assert cl.d1(cl.E1Chain(), X).is_zero()


def test_normalized_cancels_opposite_terms():
    t = instance("H2prime/SepTwist").term()
    y = cl.chain(t) + -cl.chain(t)
    assert y.is_zero()
    assert not cl.chain(t).is_zero()


def test_chain_json_roundtrip():
    y = cl.chain(instance("H2prime/BPTwist0").term(3))
    back = cl.E1Chain.from_json(y.to_json())
    assert back.normalized() == y.normalized()


# ---------------------------------------------------------------- d1

def test_d1_on_five_element_cell():
    y = cl.chain(instance("H2prime/SepTwist").term())
    dy = cl.d1(y, X)
    assert 0 < len(dy) <= 5
    faces = {f.multiset for f in cc.faces(D5, X)}
    assert {t.multiset for t in dy.terms} == faces
    assert all(t.payload == y.terms[0].payload for t in dy.terms)


def test_d1_includes_faces_dropping_two_components():
    dy = cl.d1(cl.chain(instance("H2prime/SepTwist").term()), X)
    low = [t for t in dy.terms if t.cell.tag == "H1_lowrank"]
    assert [t.multiset for t in low] == [cc.multiset([a3, add(a1, a2), X])]


def test_bounding_pair_faces_have_opposite_signs():
    D = bp_cell()
    inst = instance("H2_boundingpair/BPTwist", D)
    dy = cl.d1(cl.chain(inst.term()), X)
    two = [t for t in dy.terms if t.cell.tag == "H1_type2"]
    assert len(two) == 2
    assert {t.orbit_sign for t in two} == {1, -1}
    assert two[0].weight == -two[1].weight


def test_bounding_pair_constraint_in_random_tables():
    D = bp_cell()
    comps = instance("H2_boundingpair/BPTwist", D).components
    c = cc.classify(D).repeated
    i, j = [k for k, (_, v) in enumerate(comps) if v == c]
    for seed in range(50):
        s = cl.SignTable("random", seed)
        assert s.incidence(comps, i) == -s.incidence(comps, j)


def test_d1_rejects_vertices():
    comps = tuple((f"c{i}", v) for i, v in enumerate(STD))
    y = cl.chain(cl.make_term(comps, ()))
    with pytest.raises(cl.ChainError):
        cl.d1(y, X)


def test_d1_is_linear():
    rng = random.Random(3)
    insts = cl.generator_instances(STD, X)
    for _ in range(30):
        picks = [rng.choice(insts) for _ in range(3)]
        ks = [rng.randint(-3, 3) for _ in picks]
        y = cl.E1Chain(tuple(p.term(k) for p, k in zip(picks, ks)))
        parts = cl.E1Chain()
        for p, k in zip(picks, ks):
            parts = parts + cl.d1(cl.chain(p.term()), X).scale(k)
        assert cl.d1(y, X).normalized() == parts.normalized()


def test_d1_squared_on_standard_lattice():
    rep = cl.d1_squared_over(STD, X)
    assert rep.cells > 0 and rep.ok


def test_geometric_incidence_rejects_non_faces():
    with pytest.raises(cl.ChainError):
        cl.geometric_incidence(list(STD) + [X], (0, 3))


# ---------------------------------------------------------------- homomorphisms

def test_sigma_C_single_term():
    C = cc.multiset([a1, a2, a3, X])
    comps = tuple((f"c{i}", v) for i, v in enumerate(C))
    g = bcj.sep_twist([(mod2(a1), mod2((0, 0, 0, 1, 0, 0)))])
    y = cl.chain(cl.make_term(comps, (g,)))
    assert cl.sigma_C(y, C) == bcj.sigma(g)
    assert cl.sigma_C(y.scale(2), C) == ZERO


def test_nu_flips_with_orbit_sign():
    inst = instance("H2prime/BPTwist0")
    y_plus = cl.chain(inst.term())
    y_minus = cl.chain(inst.with_orbit(-1).term())
    p = cc.classify(D5).principal
    assert cl.nu_Cc(y_plus, D5, p) == -cl.nu_Cc(y_minus, D5, p) != 0
    assert cl.nu_D(y_plus, D5) == cl.nu_Cc(y_plus, D5, p)
    assert cl.nu_plus_Cc(y_minus, D5, p) == 0


def test_nu_requires_principal_element():
    y = cl.chain(instance("H2prime/BPTwist0").term())
    with pytest.raises(cl.ChainError):
        cl.nu_Cc(y, D5, a3)


def test_mu_of_bptwist_term_is_zero():
    D = bp_cell()
    y = cl.chain(instance("H2_boundingpair/BPTwist", D).term())
    assert cl.mu_C(y, D) == 0
    y2 = cl.chain(instance("H2_boundingpair/SepTwist", D).term())
    assert cl.mu_C(y2, D) == 1
    with pytest.raises(cl.ChainError):
        cl.mu_C(y, D5)


def test_homomorphisms_are_additive():
    inst = instance("H2prime/SepTwist")
    y = cl.chain(inst.term(2), inst.term(-5))
    assert cl.nu_D(y, D5) == cl.nu_D(cl.chain(inst.term()), D5) * -3
    assert cl.sigma_C(y, D5) == bcj.sigma_word(inst.payload)


def test_identities_on_all_instances():
    rng = random.Random(4)
    for inst in cl.generator_instances(STD, X):
        assert cl.check_d1_identities(inst).ok, inst.label
        for s in (1, -1):
            w = cl.random_instance_word(inst, rng).with_orbit(inst.orbit_sign and s)
            for seed in range(3):
                assert cl.check_d1_identities(w, cl.SignTable("random", seed)).ok


def test_septwist_identity_sides_equal_sigma():
    inst = instance("H2prime/SepTwist")
    rep = cl.check_d1_identities(inst)
    sig = [c for c in rep.checks if c.identity == "sigma_C"]
    assert sig and all(c.lhs == c.rhs == bcj.sigma_word(inst.payload) for c in sig)


def test_bptwist_on_bounding_pair_sigma_vanishes():
    inst = instance("H2_boundingpair/BPTwist", bp_cell())
    rep = cl.check_d1_identities(inst)
    sig = [c for c in rep.checks if c.identity == "sigma_C"]
    assert sig and all(c.lhs == c.rhs == ZERO for c in sig)


def test_instance_json_roundtrip():
    inst = instance("H2prime/BPTwist1")
    assert cl.GeneratorInstance.from_json(inst.to_json()) == inst


# ---------------------------------------------------------------- pairings

def test_theta_on_separating_configuration():
    d1_, d2_ = cl.separating_configuration(STD)
    assert cl.theta_pairing(STD, [d1_], [d2_], X) == 1
    assert cl.theta_pairing(STD, [d1_], [d1_]) == 0


def test_theta_rejects_bad_A():
    d1_, d2_ = cl.separating_configuration(STD)
    with pytest.raises(cl.ChainError):
        cl.theta_pairing(STD[:2], [d1_], [d2_])
    with pytest.raises(cl.ChainError):
        cl.theta_pairing((a1, a2, add(a1, a2)), [d1_], [d2_], X)


def test_Theta_A_off_A_is_zero():
    d1_, d2_ = cl.separating_configuration(STD)
    assert cl.Theta_A(STD, [a1, a2, add(a2, a3)], [d1_], [d2_]) == 0
    v = cl.Theta_A(STD, STD, [d1_], [d2_])
    w = cl.Theta_A(STD, STD, [d2_], [d1_])
    assert v ^ w == cl.theta_pairing(STD, [d1_], [d2_])


def test_Theta_A_numbering_checked():
    d1_, d2_ = cl.separating_configuration(STD)
    with pytest.raises(cl.ChainError):
        cl.Theta_A(STD, STD, [d1_], [d2_], numbering=(0, 1, 2, 2))
    vals = {cl.Theta_A(STD, STD, [d1_], [d2_], numbering=p) for p in [(0, 1, 2, 3), (3, 2, 1, 0)]}
    assert vals <= {0, 1}


def test_relation_basis_spans_relations():
    classes = list(D5)
    for v in cl.relation_basis(classes):
        assert all(sum(v[j] * classes[j][i] for j in range(5)) == 0 for i in range(6))
    assert len(cl.relation_basis(classes)) == cc.dimension(D5)

