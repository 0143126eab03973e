import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from torellicore import cyclecomplex as cc, descent as de
from torellicore.homlattice import add, combo, sub
from torellicore.sampling import random_vertex_set

a1, a2, a3 = (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)
X = add(a1, a2, a3)
STD = (a1, a2, a3)
R = de.AlgebraicReal


def fixed_form(x):
    """A fixed admissible form for x (the seed pins it down)."""
    rng = random.Random(0)
    return de.FLinearForm.random(rng, x)


# ---------------------------------------------------------------- exact reals

def test_sign_examples():
    assert de.sign(R.sqrt(2) * 3 - R.sqrt(3) * 2) == 1
    assert de.sign(R.sqrt(3) * 2 - R.sqrt(2) * 3) == -1
    assert de.sign(R()) == 0
    assert de.sign(R.rational(Fraction(-1, 7))) == -1


def test_zero_is_exact():
    v = R.sqrt(5) + R.sqrt(7) - R.sqrt(5) - R.sqrt(7)
    assert v.is_zero() and de.sign(v) == 0


def test_close_values_are_separated():
    # convergents of sqrt 2 bracket it from both sides
    v = R.sqrt(2) * 169 - R.rational(239)  # 169 sqrt2 ~ 239.0021
    assert de.sign(v) == 1
    w = R.sqrt(2) * 408 - R.rational(577)  # 408 sqrt2 ~ 576.9991
    assert de.sign(w) == -1


coef = st.integers(-50, 50)


@given(st.lists(coef, min_size=5, max_size=5))
def test_sign_agrees_with_float_when_far_from_zero(cs):
    v = R(cs)
    approx = sum(c * math.sqrt(p) for c, p in zip(cs, de.RADICANDS))
    assume(abs(approx) > 1e-6)
    assert de.sign(v) == (1 if approx > 0 else -1)


@given(st.lists(coef, min_size=5, max_size=5), st.lists(coef, min_size=5, max_size=5))
def test_order_is_consistent(u, v):
    x, y = R(u), R(v)
    assert (x < y) + (x == y) + (x > y) == 1
    assert abs(x - y) == abs(y - x)
    assert de.sign(abs(x)) >= 0


def test_algebraic_real_json():
    v = R([1, Fraction(-2, 3), 0, 5, 0])
    assert R.from_json(v.to_json()) == v
    assert str(R()) == "0"


# ---------------------------------------------------------------- weights

def test_F_formulas():
    f = fixed_form(X)
    vals = [f(a) for a in STD]
    diffs = [abs(vals[i] - vals[j]) for i in range(3) for j in range(i + 1, 3)]
    assert de.F1(STD, f) == de.amax(diffs)
    assert de.F2(STD, f) == abs(vals[0]) + abs(vals[1]) + abs(vals[2])
    assert f(X).is_zero()


def test_lex_succ():
    one, two = R.rational(1), R.rational(2)
    assert de.lex_succ((two, one), (one, two))
    assert de.lex_succ((one, two), (one, one))
    assert not de.lex_succ((one, one), (one, one))


def test_form_validation():
    with pytest.raises(de.DescentError):
        de.FLinearForm(((1, 0, 0, 0, 0, 0),) * 5)
    with pytest.raises(de.DescentError):
        de.FLinearForm(((1, 0, 0),) * 5)
    f = fixed_form(X)
    assert de.FLinearForm.from_json(f.to_json()) == f
    with pytest.raises(de.DescentError):
        de.check_admissible(f, a1)


# ---------------------------------------------------------------- equations

def test_type_one_lambda_chain():
    C = cc.multiset(list(STD) + [X])
    eqs = de.lambda_equations_for(C, X)
    assert eqs and {e.source for e in eqs} == {"se2"}
    groups = [de._group(C, X, (add(p, q),)) for p, q in ((a1, a2), (a2, a3), (a3, a1))]
    for e in eqs:
        assert e.variables in {g ^ h for g in groups for h in groups if g != h}


def test_type_two_sigma_equation_has_three_terms():
    C = cc.multiset(list(STD) + [add(a1, a2)])
    eqs = de.sigma_equations_for(C, X, a1)
    assert len(eqs) == 1
    assert 1 <= len(eqs[0].variables) <= 3
    with pytest.raises(cc.TaxonomyError):
        de.sigma_equations_for(C, X, a3)


def test_equations_reject_five_element_input():
    with pytest.raises(cc.TaxonomyError):
        de.sigma_equations_for(list(STD) + [add(a1, a2), X], X)


def test_equation_json():
    eq = de.sigma_equations_for(cc.multiset(list(STD) + [X]), X)[0]
    j = eq.to_json()
    assert j["source"] == "ses1" and len(j["variables"]) == len(eq.variables)


# ---------------------------------------------------------------- sigma descent

def test_sigma_descent_standard():
    rep = de.verify_sigma_descent(STD, X)
    assert rep.ok
    forced = [n for s in rep.steps for n in s.forced]
    assert len(forced) == 9


def test_sigma_descent_weighted_x():
    x = combo([1, 2, 3], STD)
    assert de.verify_sigma_descent(STD, x).ok


def test_sigma_descent_rejects_singleton():
    with pytest.raises(de.DescentError):
        de.verify_sigma_descent([X], X)


def test_sigma_descent_random():
    rng = random.Random(21)
    for _ in range(5):
        A, x = random_vertex_set(rng, 30)
        assert de.verify_sigma_descent(A, x).ok


def test_nine_targets_are_the_avoiding_cells():
    aux = de.sigma_auxiliary_sets(STD)
    avoiding = {D for D in cc.h2prime_supersets_of_vertex_set(STD, X) if not cc.contains_any(D, aux)}
    assert avoiding == set(de.sigma_targets(STD).values())


# ---------------------------------------------------------------- lambda descent

def test_lambda_descent_standard():
    rep = de.verify_lambda_descent_case1(STD, X, fixed_form(X))
    assert rep.ok, rep.to_text()
    forced = [n for s in rep.steps for n in s.forced]
    assert {f"D{k}" for k in range(1, 15)} <= set(forced)


def test_lambda_first_step_forces_D10_D13():
    rep = de.verify_lambda_descent_case1(STD, X, fixed_form(X))
    assert rep.steps[0].expected == ["D10", "D13"]
    assert set(rep.steps[0].forced) >= {"D10", "D13"}


def test_table_rows():
    N = de.normalize(STD, X, fixed_form(X))
    r1, r2, r3 = N.r
    rows = {row.label: row for row in de.lambda_table(N, X)}
    assert rows["A2"].F1 == r1 + r3 * 2
    assert rows["A6"].F1 == r1 + r2 + r3 * 2
    assert rows["A7"].F1 == r1 * 2 + r2 + r3
    assert rows["A7"].F1 > r1 + r3
    assert all(row.in_H0 and row.heavier for row in rows.values())


def test_normalize_orders_values():
    rng = random.Random(22)
    for _ in range(20):
        A, x = random_vertex_set(rng, 30)
        N = de.normalize(A, x, de.FLinearForm.random(rng, x))
        v = [N.f(a) for a in N.a]
        assert v[0] > v[1] > 0 > v[2]


def test_lambda_descent_random_both_branches():
    rng = random.Random(23)
    branches = set()
    for _ in range(12):
        A, x = random_vertex_set(rng, 30)
        for _ in range(3):
            rep = de.verify_lambda_descent_case1(A, x, de.FLinearForm.random(rng, x))
            assert rep.ok
            branches.add(rep.data["A4_branch"])
    assert branches == {"r1>=r2+r3", "r1<r2+r3"}


def test_lambda_rejects_inadmissible_form():
    f = de.FLinearForm.random(random.Random(1), combo([1, 2, 1], STD))
    with pytest.raises(de.DescentError):
        de.verify_lambda_descent_case1(STD, X, f)


def test_case2_step():
    rng = random.Random(24)
    nonvacuous = 0
    for _ in range(60):
        n1, n2 = rng.randint(1, 6), rng.randint(1, 6)
        if math.gcd(n1, n2) != 1:
            continue
        x = combo([n1, n2], (a1, a2))
        c = combo([rng.randint(-4, 4), rng.randint(-4, 4), 1], STD)
        rep = de.lambda_case2_step(a1, a2, c, de.FLinearForm.random(rng, x), x)
        assert rep.ok, rep.to_text()
        assert any("not checked" in n for n in rep.notes)
        nonvacuous += sum(1 for b in rep.data["branches"] if not b.get("vacuous"))
    assert nonvacuous > 0


def test_case2_rejects_bad_basis():
    x = add(a1, a2)
    f = de.FLinearForm.random(random.Random(2), x)
    with pytest.raises(de.DescentError):
        de.lambda_case2_step(a1, a2, add(a1, a2), f, x)


# ---------------------------------------------------------------- bounded kernels

def test_kernel_below_first_weight_is_empty():
    k = de.bounded_kernel_check("sigma", 2)
    assert k.variables == 0 and k.kernel_dim == 0 and k.ok


def test_kernel_small_bound():
    for system in ("sigma", "lambda"):
        k = de.bounded_kernel_check(system, 4)
        assert k.variables > 0 and k.kernel_dim == 0


def test_kernel_rejects_unknown_system():
    with pytest.raises(de.DescentError):
        de.bounded_kernel_check("tau", 3)


def test_universe_respects_bound():
    V = de.bounded_universe(X, 5)
    for D in V:
        for S in cc.sub_multisets(D, 3):
            if cc.is_in_H0prime(S, X):
                assert cc.n_weight(S, X).n <= 5

