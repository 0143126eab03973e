"""The ten acceptance suites.

Each suite is a function ``(seed) -> SuiteResult``.  Results carry one
entry per check, summary counts and the wall time; the JSON form leaves the
wall time out unless asked, so equal seeds give byte-identical reports.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

from . import bcj, chainlab as cl, cyclecomplex as cc, descent as de, quadbool as qb, stabrep as sr
from .homlattice import GENUS, RANK, complete_symplectic_mod2, mod2, mod2_basis
from .sampling import STANDARD_A, STANDARD_X, random_lagrangian_mod2, random_vertex_set

DEFAULT_SEED = 20240


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    title: str
    budget: float | None = None
    checks: List[CheckResult] = field(default_factory=list)
    counts: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    def check(self, name: str, ok: bool, detail: Any = "") -> bool:
        self.checks.append(CheckResult(name, bool(ok), str(detail)))
        return bool(ok)

    def tally(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.seconds < self.budget

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "title": self.title,
            "ok": self.ok,
            "passed": sum(c.ok for c in self.checks),
            "failed": len(self.failures),
            "counts": dict(sorted(self.counts.items())),
            "checks": [c.to_json() for c in self.checks],
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
            out["budget"] = self.budget
            out["within_budget"] = self.within_budget
        return out

    def summary_line(self) -> str:
        status = "PASS" if self.ok and self.within_budget else "FAIL"
        passed = sum(c.ok for c in self.checks)
        budget = f" (budget {self.budget:g} s)" if self.budget is not None else ""
        return f"{status} {self.suite}: {passed}/{len(self.checks)} checks, {self.seconds:.2f} s{budget}"

    def to_text(self, verbose: bool = False) -> str:
        lines = [self.summary_line()]
        shown = self.checks if verbose else self.failures
        for c in shown:
            lines.append(f"  [{'ok' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


SuiteFn = Callable[[int], SuiteResult]
SUITES: Dict[str, Tuple[str, SuiteFn]] = {}


def suite(name: str, title: str, budget: float | None = None):
    def wrap(fn: Callable[[SuiteResult, random.Random], None]) -> SuiteFn:
        def run(seed: int = DEFAULT_SEED) -> SuiteResult:
            res = SuiteResult(name, title, budget)
            rng = random.Random(f"{name}|{seed}")
            t0 = time.perf_counter()
            fn(res, rng)
            res.seconds = time.perf_counter() - t0
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        SUITES[name] = (title, run)
        return run

    return wrap


# ---------------------------------------------------------------- 1


@suite("boolalg-dims", "Boolean algebra dimensions", budget=1.0)
def boolalg_dims(res: SuiteResult, rng: random.Random) -> None:
    """dim B'_3 = 35, dim B' = 36 and |Omega_0| = 36."""
    g = GENUS
    res.check("dim B'_3 = g(4g^2-1)/3 = 35", qb.dim_Bprime(3) == g * (4 * g * g - 1) // 3 == 35, qb.dim_Bprime(3))
    res.check("dim B' = 36", qb.dim_Bprime() == 36, qb.dim_Bprime())
    count = sum(1 for w in range(1 << RANK) if qb.arf(w) == 0)
    res.check("|Omega_0| = 36 over all 64 forms", count == 36 == qb.NPOINTS, count)
    dims = [qb.dim_Bprime(d) for d in range(RANK + 1)]
    res.check("filtration dimensions increase to 36", dims == sorted(dims) and dims[-1] == 36, dims)


# ---------------------------------------------------------------- 2


@suite("sigma-hat-iota", "sigma-hat of the involution lies outside B'_3", budget=1.0)
def sigma_hat_iota(res: SuiteResult, rng: random.Random) -> None:
    std = tuple(mod2_basis(n) for n in ("a1", "a2", "a3", "b1", "b2", "b3"))
    e = bcj.sigma_hat(bcj.involution(std))
    res.check("sigma-hat(iota) not in B'_3 (standard basis)", not qb.in_Bk(e, 3))
    res.check("degree of sigma-hat(iota) is 4", qb.degree(e) == 4, qb.degree(e))
    for _ in range(20):
        basis = complete_symplectic_mod2(random_lagrangian_mod2(rng))
        if qb.in_Bk(bcj.sigma_hat(bcj.involution(basis)), 3):
            res.check("sigma-hat(iota) not in B'_3 (random basis)", False, basis)
            return
        res.tally("random bases")
    res.check("sigma-hat(iota) not in B'_3 for 20 random bases", True)


# ---------------------------------------------------------------- 3


@suite("form-family", "four Arf-zero forms per vertex set")
def form_family(res: SuiteResult, rng: random.Random) -> None:
    std = qb.four_forms([mod2(a) for a in STANDARD_A])
    b = std.basis[GENUS:]
    res.check("standard family: omega_0(b_j) = 0 for all j",
              all(qb.evaluate(std.forms[0], v) == 0 for v in b))
    bad = []
    for _ in range(100):
        A = random_lagrangian_mod2(rng)
        fam = qb.four_forms(A)
        brute = qb.forms_equal_one_on(A)
        ok = (
            len(brute) == 4
            and sorted(fam.forms) == sorted(brute)
            and all(qb.arf(w) == 0 and all(qb.evaluate(w, a) == 1 for a in A) for w in fam.forms)
            and all(
                qb.evaluate(fam.forms[i], fam.basis[GENUS + j - 1]) == qb.numbering_value(i, j)
                for i in range(4)
                for j in (1, 2, 3)
            )
        )
        res.tally("vertex sets")
        if not ok:
            bad.append(A)
    res.check("100 random A: exactly four forms, matching the filter and numbering", not bad, bad[:3])


# ---------------------------------------------------------------- 4


@suite("theta-pairing", "theta pairing on two separating twists")
def theta_pairing(res: SuiteResult, rng: random.Random) -> None:
    h1, h2 = cl.separating_configuration(STANDARD_A)
    v = cl.theta_pairing(STANDARD_A, [h1], [h2], STANDARD_X)
    res.check("standard configuration pairs to 1", v == 1, v)
    res.check("h1 = h2 pairs to 0", cl.theta_pairing(STANDARD_A, [h1], [h1], STANDARD_X) == 0)
    bad = []
    for _ in range(100):
        A, x = random_vertex_set(rng, 20)
        h1, h2 = cl.separating_configuration(A)
        if cl.theta_pairing(A, [h1], [h2], x) != 1:
            bad.append(A)
        res.tally("vertex sets")
    res.check("100 random A pair to 1", not bad, bad[:3])


# ---------------------------------------------------------------- 5


def _random_z_word(rng: random.Random, length: int) -> sr.TypeOneWord:
    return sr.zw(*((rng.choice(sr.Z), rng.choice((-2, -1, 1, 2))) for _ in range(length)))


def _random_uv_word(rng: random.Random, length: int) -> sr.TypeOneWord:
    spec = [(rng.choice(sr.UV), rng.choice((-1, 1))) for _ in range(length)]
    w = sr.TypeOneWord.parse(spec)
    su, sv = sr.f_image(w)
    tail = [("u2", -su)] if su else []
    tail += [("v2", -sv)] if sv else []
    return sr.TypeOneWord.parse(spec + tail)


@suite("generator-tables", "rho-vectors of z1, z2, z3 and the lift identities")
def generator_tables(res: SuiteResult, rng: random.Random) -> None:
    expected = {"z1": (0, 0, 1, 1), "z2": (0, 1, 0, 1), "z3": (1, 1, 1, 1)}
    table = sr.type_one_rho_table()
    for z, r in expected.items():
        res.check(f"rho({z}) = {r}", tuple(table[z]) == r, table[z])
        res.check(f"rho_IM({z}) = {r}", sr.rho_IM(sr.zw((z, 1))) == r)
    res.check("xi table z1 -> (1,0), z2 -> (0,1), z3 -> (0,0)",
              all(sr.xi(sr.zw((z, 1))) == sr.XI_TABLE[z] for z in sr.Z))
    bad_sum, bad_lift = [], []
    for k in range(1000):
        w = _random_z_word(rng, rng.randint(0, 8)) if k % 2 else _random_uv_word(rng, rng.randint(0, 10))
        r = sr.rho_IM(w)
        if (r[0] ^ r[1] ^ r[2] ^ r[3]) != 0:
            bad_sum.append(str(w))
        if not sr.liftrho_check(w):
            bad_lift.append(str(w))
        res.tally("words")
    res.check("rho_0 + rho_1 + rho_2 + rho_3 = 0 on 1000 words", not bad_sum, bad_sum[:3])
    res.check("rho_0 + rho_1 = xi_2 and rho_0 + rho_2 = xi_1 on 1000 words", not bad_lift, bad_lift[:3])


# ---------------------------------------------------------------- 6


def _random_ck_word(rng: random.Random) -> sr.FiveCurveWord:
    """A random product of squares and commutators in w_0..w_3, shuffled by conjugation."""
    parts: List[Tuple[int, int]] = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5:
            k, e = rng.randrange(4), rng.choice((-1, 1))
            parts += [(k, e), (k, e)]
        else:
            k, m = rng.sample(range(4), 2)
            parts += [(k, 1), (m, 1), (k, -1), (m, -1)]
        if rng.random() < 0.5:
            c = (rng.randrange(4), rng.choice((-1, 1)))
            parts = [c] + parts + [(c[0], -c[1])]
    return sr.fw(*parts)


@suite("psi-tables", "psi on the five-curve stabilizer and on [iota, z3]")
def psi_tables(res: SuiteResult, rng: random.Random) -> None:
    cases = [
        ("w0^2", sr.fw((0, 2)), 2, 1),
        ("[w0, w1]", sr.fw((0, 1), (1, 1), (0, -1), (1, -1)), 0, 0),
        ("w2 w0^-1", sr.fw((2, 1), (0, -1)), 0, 0),
    ]
    for label, w, nu, psi in cases:
        res.check(f"nu({label}) = {nu}, psi = {psi}", w.nu() == nu and sr.psi_on_CK(w) == psi)
    bad = []
    for _ in range(1000):
        w = _random_ck_word(rng)
        if not sr.in_CK(w):
            bad.append(str(w.to_json()))
            continue
        via_rho = sr.psi_M(sr.canonical_decomposition_ck(w))
        if via_rho != sr.psi_on_CK(w):
            bad.append(str(w.to_json()))
        res.tally("products")
    res.check("psi from rho-tables equals nu/2 on 1000 products", not bad, bad[:3])
    v = sr.psi_M(sr.iota_z3_decomposition())
    res.check("decomposition of [iota, z3] evaluates to 1", v == 1, v)


# ---------------------------------------------------------------- 7


def sigma_avoiding(A0, x) -> List[cc.HMultiset]:
    aux = de.sigma_auxiliary_sets(A0)
    return [D for D in cc.h2prime_supersets_of_vertex_set(A0, x) if not cc.contains_any(D, aux)]


def lambda_avoiding(A0, x, f) -> Tuple[de.Normalized, List[cc.HMultiset]]:
    N = de.normalize(A0, x, f)
    aux = [row.A for row in de.lambda_table(N, x)]
    return N, [D for D in cc.h2prime_supersets_of_vertex_set(N.a, x) if not cc.contains_any(D, aux)]


@suite("taxonomy-lattice", "the 102 maximal multisets and the 9- and 14-cell lists", budget=10.0)
def taxonomy_lattice(res: SuiteResult, rng: random.Random) -> None:
    bad_count, bad_dim, bad9, bad14 = [], [], [], []
    for _ in range(100):
        A, x = random_vertex_set(rng, 20)
        sup = cc.supersets_in_H(A, x)
        if len(sup) != 102 or len(set(sup)) != 102:
            bad_count.append((A, len(sup)))
        if any(cc.dimension(E) != 3 for E in sup):
            bad_dim.append(A)
        if sorted(sigma_avoiding(A, x)) != sorted(de.sigma_targets(A).values()):
            bad9.append(A)
        N, av = lambda_avoiding(A, x, de.FLinearForm.random(rng, x))
        if sorted(av) != sorted(de.lambda_targets(N.a).values()):
            bad14.append(A)
        res.tally("vertex sets")
    res.check("102 distinct maximal multisets for 100 random A", not bad_count, bad_count[:2])
    res.check("every maximal multiset has cell dimension 3", not bad_dim, bad_dim[:2])
    res.check("nine cells avoiding the sigma auxiliaries match the list", not bad9, bad9[:2])
    res.check("fourteen cells avoiding the lambda auxiliaries match the list", not bad14, bad14[:2])


# ---------------------------------------------------------------- 8


def _instance_pool(rng: random.Random, lattices: int = 4) -> Dict[str, List[cl.GeneratorInstance]]:
    pool: Dict[str, List[cl.GeneratorInstance]] = {}
    sets = [(STANDARD_A, STANDARD_X)] + [random_vertex_set(rng, 12) for _ in range(lattices)]
    for A, x in sets:
        for inst in cl.generator_instances(A, x):
            pool.setdefault(inst.label, []).append(inst)
    return dict(sorted(pool.items()))


@suite("d1-identities", "d1 identities for every generator kind under random sign tables")
def d1_identities(res: SuiteResult, rng: random.Random) -> None:
    pool = _instance_pool(rng)
    res.counts["generator kinds"] = len(pool)
    failures: List[str] = []
    geometric = [i for insts in pool.values() for i in insts[:40]]
    for inst in geometric:
        if not cl.check_d1_identities(inst).ok:
            failures.append(f"geometric {inst.label}")
    res.check("geometric signs: identities hold", not failures, failures[:3])
    failures = []
    for t in range(1000):
        signs = cl.SignTable("random", rng.randrange(1 << 30))
        for kind, insts in pool.items():
            inst = rng.choice(insts)
            if inst.orbit_sign is not None:
                inst = inst.with_orbit(rng.choice((1, -1)))
            inst = cl.random_instance_word(inst, rng)
            rep = cl.check_d1_identities(inst, signs)
            res.tally("identity checks", len(rep.checks))
            if not rep.ok:
                failures.append(f"table {t} {kind}")
        res.tally("sign tables")
    res.check("1000 random sign tables: identities hold for every kind", not failures, failures[:3])


# ---------------------------------------------------------------- 9


@suite("descent", "sigma and lambda descent steps with bounded kernels", budget=60.0)
def descent(res: SuiteResult, rng: random.Random) -> None:
    bad: List[str] = []
    branches = set()
    for t in range(50):
        A0, x = random_vertex_set(rng, 30)
        if not de.verify_sigma_descent(A0, x).ok:
            bad.append(f"sigma {t}")
        res.tally("sigma descents")
        for _ in range(5):
            f = de.FLinearForm.random(rng, x)
            rep = de.verify_lambda_descent_case1(A0, x, f)
            branches.add(rep.data["A4_branch"])
            res.tally("lambda descents")
            res.tally("table inequalities", sum(1 for c in rep.checks if c.name.startswith("A")))
            if not rep.ok:
                bad.append(f"lambda {t}")
    res.check("50 sigma and 250 lambda descent steps succeed", not bad, bad[:3])
    res.check("both A4 branches exercised", len(branches) == 2, sorted(branches))
    for system in ("sigma", "lambda"):
        k = de.bounded_kernel_check(system, 8)
        res.counts[f"{system} kernel variables"] = k.variables
        res.check(f"{system} kernel at bound 8 is 0", k.ok, f"kernel {k.kernel_dim} on {k.variables} unknowns")


# ---------------------------------------------------------------- 10


@suite("d1-squared", "d1 d1 = 0 on certified 2-cells")
def d1_squared(res: SuiteResult, rng: random.Random) -> None:
    bad = []
    for _ in range(20):
        A, x = random_vertex_set(rng, 20)
        rep = cl.d1_squared_over(A, x)
        res.tally("2-cells", rep.cells)
        res.tally("lattices")
        if not rep.ok or rep.cells == 0:
            bad.append((A, len(rep.failures)))
    res.check("d1 d1 = 0 across 20 random lattices", not bad, bad[:2])


ORDER = (
    "boolalg-dims", "sigma-hat-iota", "form-family", "theta-pairing", "generator-tables",
    "psi-tables", "taxonomy-lattice", "d1-identities", "descent", "d1-squared",
)


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(ORDER)}")
    return SUITES[name][1](seed)


def run_all(seed: int = DEFAULT_SEED) -> List[SuiteResult]:
    return [run_suite(n, seed) for n in ORDER]


__all__ = [
    "CheckResult", "DEFAULT_SEED", "ORDER", "SUITES", "SuiteResult", "lambda_avoiding",
    "run_all", "run_suite", "sigma_avoiding",
]
