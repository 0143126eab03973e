"""Formal E1 chains over the cell lattice, the differential d1 and its test homomorphisms.

A term is an element [h]_M: a cell given by its named components, a generator
word h in the stabilizer, an orbit sign for the two-orbit families, an
orientation sign and an integer coefficient.  Component names are the curve
names that the generator tags refer to, so nu and mu can be read off.

Incidence signs come from a ``SignTable``.  The default table orients every
cell by the canonical basis of its relation space and computes incidences as
boundary orientations of the weight polytope; a seeded table draws arbitrary
signs subject to the bounding-pair constraint.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .bcj import GeneratorError, SymbolicGenerator, bp_twist, lantern_rewrite, sep_twist, sigma, sigma_word
from .cyclecomplex import (
    CellClass,
    HMultiset,
    TaxonomyError,
    classify,
    dimension,
    is_in_H0prime,
    is_submultiset,
    multiset,
    satisfies_M_conditions,
    supersets_in_H,
)
from .homlattice import RANK, HClass, det, intersection_mod2, mod2, neg
from .quadbool import BPrimeElement, ZERO, four_forms
from .stabrep import StabilizerError, mu_word, nu_word

Component = Tuple[str, HClass]
TWO_ORBIT_TAGS = ("H1_type2", "H2prime")


class ChainError(ValueError):
    """Malformed chain data or a homomorphism applied outside its domain."""


# ---------------------------------------------------------------- terms and chains

@dataclass(frozen=True)
class LabeledTerm:
    cell: CellClass
    components: Tuple[Component, ...]
    payload: Tuple[SymbolicGenerator, ...]
    orbit_sign: int | None = None
    orientation_sign: int = 1
    coefficient: int = 1

    def __post_init__(self) -> None:
        if multiset(c for _, c in self.components) != self.cell.multiset:
            raise ChainError("components do not match the cell multiset")
        if len({n for n, _ in self.components}) != len(self.components):
            raise ChainError("component names must be distinct")
        two = self.cell.tag in TWO_ORBIT_TAGS
        if two and self.orbit_sign not in (1, -1):
            raise ChainError(f"{self.cell.tag} term needs an orbit sign")
        if not two and self.orbit_sign is not None:
            raise ChainError(f"{self.cell.tag} term carries no orbit sign")
        if self.orientation_sign not in (1, -1):
            raise ChainError("orientation sign must be +1 or -1")

    @property
    def multiset(self) -> HMultiset:
        return self.cell.multiset

    @property
    def weight(self) -> int:
        """Signed multiplicity: coefficient times orientation sign."""
        return self.coefficient * self.orientation_sign

    def component_of(self, c: HClass) -> List[str]:
        return [n for n, v in self.components if v == tuple(c)]

    def key(self) -> tuple:
        return (self.cell.multiset, self.components, self.orbit_sign, self.payload)

    def to_json(self) -> dict:
        out: Dict[str, Any] = {
            "components": [[n, list(v)] for n, v in self.components],
            "tag": self.cell.tag,
            "payload": [g.to_json() for g in self.payload],
            "orientation_sign": self.orientation_sign,
            "coefficient": self.coefficient,
        }
        if self.orbit_sign is not None:
            out["orbit_sign"] = self.orbit_sign
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "LabeledTerm":
        comps = tuple((str(n), tuple(int(t) for t in v)) for n, v in obj["components"])
        return make_term(
            comps,
            tuple(SymbolicGenerator.from_json(g) for g in obj["payload"]),
            orbit_sign=obj.get("orbit_sign"),
            orientation_sign=int(obj.get("orientation_sign", 1)),
            coefficient=int(obj.get("coefficient", 1)),
        )


def sort_components(components: Iterable[Component]) -> Tuple[Component, ...]:
    """Sort by class; equal classes keep their given order (first copy is alpha+)."""
    return tuple(sorted(components, key=lambda nc: nc[1]))


def make_term(
    components: Iterable[Component],
    payload: Sequence[SymbolicGenerator],
    orbit_sign: int | None = None,
    orientation_sign: int = 1,
    coefficient: int = 1,
) -> LabeledTerm:
    comps = sort_components((n, tuple(v)) for n, v in components)
    cell = classify(multiset(v for _, v in comps))
    return LabeledTerm(cell, comps, tuple(payload), orbit_sign, orientation_sign, coefficient)


@dataclass(frozen=True)
class E1Chain:
    terms: Tuple[LabeledTerm, ...] = ()

    def __add__(self, other: "E1Chain") -> "E1Chain":
        return E1Chain(self.terms + other.terms)

    def scale(self, k: int) -> "E1Chain":
        return E1Chain(tuple(_with_coefficient(t, t.coefficient * k) for t in self.terms))

    def __neg__(self) -> "E1Chain":
        return self.scale(-1)

    def normalized(self) -> "E1Chain":
        """Merge terms that differ only in coefficient or orientation sign."""
        acc: Dict[tuple, Tuple[LabeledTerm, int]] = {}
        for t in self.terms:
            k = t.key()
            base, w = acc.get(k, (t, 0))
            acc[k] = (base, w + t.weight)
        out = [
            LabeledTerm(b.cell, b.components, b.payload, b.orbit_sign, 1, w)
            for b, w in acc.values()
            if w
        ]
        return E1Chain(tuple(sorted(out, key=lambda t: (t.multiset, t.components))))

    def is_zero(self) -> bool:
        return not self.normalized().terms

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> list:
        return [t.to_json() for t in self.terms]

    @classmethod
    def from_json(cls, obj: Sequence[Mapping[str, Any]]) -> "E1Chain":
        return cls(tuple(LabeledTerm.from_json(t) for t in obj))


def chain(*terms: LabeledTerm) -> E1Chain:
    return E1Chain(tuple(terms))


def _with_coefficient(t: LabeledTerm, k: int) -> LabeledTerm:
    return LabeledTerm(t.cell, t.components, t.payload, t.orbit_sign, t.orientation_sign, k)


# ---------------------------------------------------------------- geometric orientation

def relation_basis(classes: Sequence[HClass]) -> List[Tuple[Fraction, ...]]:
    """Canonical basis of {w : sum w_i c_i = 0}, one vector per free column of the RREF."""
    n = len(classes)
    rows = [[Fraction(classes[j][i]) for j in range(n)] for i in range(RANK)]
    pivots: List[int] = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, RANK) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(RANK):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        basis.append(tuple(v))
    return basis


def _basis_sign(Y: Sequence[Sequence[Fraction]], V: Sequence[Sequence[Fraction]]) -> int:
    """Sign of the change of basis between two bases (as column lists) of one subspace."""
    d = len(V)
    if d == 0:
        return 1
    n = len(V[0])
    for S in itertools.combinations(range(n), d):
        dv = _fdet([[V[k][i] for k in range(d)] for i in S])
        if dv != 0:
            dy = _fdet([[Y[k][i] for k in range(d)] for i in S])
            if dy == 0:
                raise ChainError("vectors do not form a basis of the cell's relation space")
            return 1 if (dy > 0) == (dv > 0) else -1
    raise ChainError("degenerate relation basis")  # pragma: no cover


def _fdet(m: Sequence[Sequence[Fraction]]) -> Fraction:
    den = 1
    for row in m:
        for v in row:
            den = den * v.denominator // _gcd(den, v.denominator)
    return Fraction(det([[int(v * den) for v in row] for row in m]), den ** len(m))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


Removal = Union[int, Sequence[int]]


def _removed(j: Removal) -> Tuple[int, ...]:
    return (j,) if isinstance(j, int) else tuple(sorted(j))


def geometric_incidence(classes: Sequence[HClass], j: Removal) -> int:
    return _geometric_incidence(tuple(tuple(c) for c in classes), _removed(j))


@functools.lru_cache(maxsize=1 << 16)
def _geometric_incidence(classes: Tuple[HClass, ...], R: Tuple[int, ...]) -> int:
    """[P_K : P_F] for the canonical orientations, F = K minus the components in R.

    The face is where the weights of the components in R vanish.  Their
    values on the relation space of K span a line, and the outward direction
    u is the relation whose R-entries are all negative.  The face basis is
    the canonical relation basis of the remaining components, padded with
    zeros.
    """
    classes = list(classes)
    VK = relation_basis(classes)
    keep = [i for i in range(len(classes)) if i not in R]
    VF = relation_basis([classes[i] for i in keep])
    if not R or len(VK) != len(VF) + 1:
        raise ChainError("removing the components does not give a codimension-one face")
    u = next((v for v in VK if v[R[0]] != 0), None)
    if u is None:
        raise ChainError("component weight is constant on the cell")
    if u[R[0]] > 0:
        u = tuple(-t for t in u)
    if any(u[r] >= 0 for r in R):
        raise ChainError("removed components do not vanish together on a face")
    face = []
    for v in VF:
        full = [Fraction(0)] * len(classes)
        for i, t in zip(keep, v):
            full[i] = t
        face.append(tuple(full))
    return _basis_sign([u] + face, VK)


# ---------------------------------------------------------------- sign tables

@dataclass(frozen=True)
class SignTable:
    """Incidence signs [D:C] and orbit comparison signs eps_{D,C}.

    ``mode="geometric"`` uses canonical orientations and eps = +1;
    ``mode="random"`` draws each sign from a generator seeded by (seed, D, C).
    Both satisfy [K:M+] = -[K:M-] for bounding-pair cells.
    """

    mode: str = "geometric"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("geometric", "random"):
            raise ChainError(f"unknown sign table mode {self.mode!r}")

    def _draw(self, kind: str, D: HMultiset, C: HMultiset) -> int:
        return random.Random(f"{self.seed}|{kind}|{D}|{C}").choice((1, -1))

    def incidence(self, components: Sequence[Component], j: Removal) -> int:
        """Incidence of the face obtained by removing component j (or the components in j)."""
        R = _removed(j)
        classes = [c for _, c in components]
        D = multiset(classes)
        C = multiset(c for i, c in enumerate(classes) if i not in R)
        if self.mode == "geometric":
            return geometric_incidence(classes, R)
        base = self._draw("inc", D, C)
        rep = [i for i, c in enumerate(classes) if c == classes[R[0]]]
        if len(rep) == 2 and rep[0] in R and rep[1] not in R:
            return -base  # removing alpha+ leaves M-
        return base

    def D_C(self, D: HMultiset, C: HMultiset) -> int:
        """[D:C]; for a bounding-pair cell this is [P_K : P_{M+}]."""
        D, C = multiset(D), multiset(C)
        if not is_submultiset(C, D) or len(D) != len(C) + 1:
            raise ChainError("C is not a codimension-one sub-multiset of D")
        rest = list(D)
        for v in C:
            rest.remove(v)
        (v,) = rest
        idx = [i for i, w in enumerate(D) if w == v]
        j = idx[-1]  # alpha- is the later copy; removing it leaves M+
        comps = tuple((f"c{i}", w) for i, w in enumerate(D))
        return self.incidence(comps, j)

    def eps(self, D: HMultiset, C: HMultiset) -> int:
        if self.mode == "geometric":
            return 1
        return self._draw("eps", multiset(D), multiset(C))

    def to_json(self) -> dict:
        return {"mode": self.mode, "seed": self.seed}


DEFAULT_SIGNS = SignTable()


# ---------------------------------------------------------------- d1

def _repeated_pair(components: Sequence[Component]) -> Tuple[int, int] | None:
    for i in range(len(components) - 1):
        if components[i][1] == components[i + 1][1]:
            return i, i + 1
    return None


def face_removals(components: Sequence[Component], x: HClass) -> List[Tuple[int, ...]]:
    """Index sets whose removal leaves a codimension-one face.

    Usually a single component; a face that drops several components at
    once appears when their weights are forced to vanish together.
    """
    comps = tuple(components)
    d = dimension(multiset(c for _, c in comps))
    out = []
    for size in range(1, len(comps)):
        for R in itertools.combinations(range(len(comps)), size):
            C = multiset(c for i, (_, c) in enumerate(comps) if i not in R)
            if dimension(C) == d - 1 and satisfies_M_conditions(C, x):
                out.append(R)
    return out


def face_terms(t: LabeledTerm, x: HClass, signs: SignTable = DEFAULT_SIGNS) -> List[LabeledTerm]:
    """The summands of d1 [h]_K: one term per codimension-one face, payload unchanged."""
    K = t.cell
    if K.tag == "other":
        raise TaxonomyError("outside characterized taxonomy")
    comps = t.components
    pair = _repeated_pair(comps) if K.tag.endswith("boundingpair") else None
    out = []
    for R in face_removals(comps, x):
        rest = tuple(c for i, c in enumerate(comps) if i not in R)
        F = classify(multiset(c for _, c in rest))
        if F.tag == "other":
            raise TaxonomyError(f"face {list(F.multiset)} is outside characterized taxonomy")
        orbit = None
        if F.tag in TWO_ORBIT_TAGS:
            hit = [] if pair is None else [i for i in pair if i in R]
            if K.tag == "H2prime":
                orbit = t.orbit_sign * signs.eps(K.multiset, F.multiset)  # type: ignore[operator]
            elif len(hit) == 1:
                orbit = 1 if hit[0] == pair[1] else -1  # type: ignore[index]  # removing alpha- leaves M+
            else:
                raise TaxonomyError("two-orbit face of a cell without orbit data")
        inc = signs.incidence(comps, R)
        out.append(LabeledTerm(F, rest, t.payload, orbit, 1, t.weight * inc))
    return out


def d1(y: E1Chain, x: HClass, signs: SignTable = DEFAULT_SIGNS) -> E1Chain:
    out: List[LabeledTerm] = []
    for t in y.terms:
        if t.cell.dim < 1:
            raise ChainError("d1 is applied to cells of positive dimension")
        out.extend(face_terms(t, x, signs))
    return E1Chain(tuple(out))


# ---------------------------------------------------------------- homomorphisms

def _terms_on(y: E1Chain, C: HMultiset) -> List[LabeledTerm]:
    C = multiset(C)
    return [t for t in y.terms if t.multiset == C]


def _odd(k: int) -> bool:
    return k % 2 != 0


def sigma_C(y: E1Chain, C: Sequence[HClass]) -> BPrimeElement:
    cell = classify(multiset(C))
    if cell.tag not in ("H1_type1", "H1_type2", "H2prime"):
        raise ChainError(f"sigma_C needs a cell without bounding pairs, got {cell.tag}")
    out = ZERO
    for t in _terms_on(y, cell.multiset):
        if _odd(t.weight):
            out = out + sigma_word(t.payload)
    return out


def _same_line(p: Any, c: HClass) -> bool:
    return p is not None and (tuple(p) == tuple(c) or tuple(p) == neg(tuple(c)))


def sigma_projection(h: Sequence[SymbolicGenerator], c: HClass) -> BPrimeElement:
    """sigma_{M,gamma} on a tagged word: the part of sigma carried by letters of class c.

    A bounding-pair letter carries ``projection`` (a class); a separating
    letter carries either ``projection`` or ``lantern`` (three classes along
    which it splits into bounding-pair twists).
    """
    out = ZERO
    for g in h:
        if "projection" in g.tags:
            if _same_line(g.tags["projection"], c):
                out = out + sigma(g)
        elif g.kind == "SepTwist" and "lantern" in g.tags:
            classes = [tuple(v) for v in g.tags["lantern"]]
            for part, v in zip(lantern_rewrite(g, classes), classes):
                if _same_line(v, c):
                    out = out + sigma(part)
        else:
            raise ChainError("missing tag: projection")
    return out


def _check_type2(cell: CellClass, c: HClass) -> None:
    if cell.tag != "H1_type2":
        raise ChainError(f"needs a type-2 cell, got {cell.tag}")
    if tuple(c) not in cell.multiset or tuple(c) == cell.special:
        raise ChainError("c must be a non-special element of C")


def sigma_Cc(y: E1Chain, C: Sequence[HClass], c: HClass) -> BPrimeElement:
    cell = classify(multiset(C))
    _check_type2(cell, c)
    out = ZERO
    for t in _terms_on(y, cell.multiset):
        if _odd(t.weight):
            out = out + sigma_projection(t.payload, c)
    return out


def _nu_cell(cell: CellClass, c: HClass) -> None:
    if cell.tag == "H2prime":
        if tuple(c) != cell.principal:
            raise ChainError("on a five-element cell c must be the principal element")
    else:
        _check_type2(cell, c)


def _nu_term(t: LabeledTerm, c: HClass) -> int:
    (name,) = t.component_of(c)
    try:
        return nu_word(t.payload, name)
    except StabilizerError as e:
        raise ChainError(str(e)) from None


def nu_Cc(y: E1Chain, C: Sequence[HClass], c: HClass) -> int:
    cell = classify(multiset(C))
    _nu_cell(cell, c)
    return sum(t.orbit_sign * t.weight * _nu_term(t, c) for t in _terms_on(y, cell.multiset))  # type: ignore[operator]


def nu_plus_Cc(y: E1Chain, C: Sequence[HClass], c: HClass) -> int:
    cell = classify(multiset(C))
    _nu_cell(cell, c)
    return sum(t.weight * _nu_term(t, c) for t in _terms_on(y, cell.multiset) if t.orbit_sign == 1)


def nu_D(y: E1Chain, D: Sequence[HClass]) -> int:
    cell = classify(multiset(D))
    if cell.tag != "H2prime":
        raise ChainError(f"nu_D needs a five-element cell with a principal element, got {cell.tag}")
    return nu_Cc(y, cell.multiset, cell.principal)  # type: ignore[arg-type]


def _element_outside(C: HMultiset, A: Sequence[HClass]) -> HClass:
    rest = list(C)
    for a in A:
        if tuple(a) not in rest:
            raise ChainError("A is not contained in C")
        rest.remove(tuple(a))
    if len(rest) != 1:
        raise ChainError("C minus A must be a single element")
    return rest[0]


def nu_CA(y: E1Chain, C: Sequence[HClass], A: Sequence[HClass]) -> int:
    return nu_Cc(y, C, _element_outside(multiset(C), A))


def nu_plus(y: E1Chain, C: Sequence[HClass], A: Sequence[HClass]) -> int:
    """nu^+_{C,A} = nu^+_{C,c} with c the element of C outside A."""
    return nu_plus_Cc(y, C, _element_outside(multiset(C), A))


def mu_C(y: E1Chain, C: Sequence[HClass]) -> int:
    cell = classify(multiset(C))
    if cell.repeated is None:
        raise ChainError("mu_C needs an element of multiplicity two")
    total = 0
    for t in _terms_on(y, cell.multiset):
        first, second = t.component_of(cell.repeated)
        try:
            total += t.weight * mu_word(t.payload, (first, second))
        except StabilizerError as e:
            raise ChainError(str(e)) from None
    return total


# ---------------------------------------------------------------- pairings

def _rho_vector(A: Sequence[HClass], h: Sequence[SymbolicGenerator], numbering=None) -> Tuple[int, ...]:
    fam = four_forms([mod2(a) for a in A])
    r = fam.rho_vector(sigma_word(h))
    if numbering is not None:
        if sorted(numbering) != [0, 1, 2, 3]:
            raise ChainError("numbering must be a permutation of 0..3")
        r = tuple(r[i] for i in numbering)
    return r


def _check_A(A: Sequence[HClass], x: HClass | None) -> None:
    if len(A) != 3:
        raise ChainError("A must have three elements")
    if x is not None and not is_in_H0prime(A, x):
        raise ChainError("A is not a Lagrangian vertex set for x")


def theta_pairing(
    A: Sequence[HClass],
    h1: Sequence[SymbolicGenerator],
    h2: Sequence[SymbolicGenerator],
    x: HClass | None = None,
) -> int:
    """Sum over i != j of rho_i(h1) rho_j(h2), the value of theta on the abelian cycle."""
    _check_A(A, x)
    r1, r2 = _rho_vector(A, h1), _rho_vector(A, h2)
    return sum(r1[i] * r2[j] for i in range(4) for j in range(4) if i != j) & 1


def Theta_A(
    A: Sequence[HClass],
    cell: Sequence[HClass],
    h1: Sequence[SymbolicGenerator],
    h2: Sequence[SymbolicGenerator],
    numbering: Sequence[int] | None = None,
    x: HClass | None = None,
) -> int:
    """Sum over i < j of rho_i(h1) rho_j(h2) on a bar term over a vertex, 0 off A."""
    _check_A(A, x)
    if multiset(cell) != multiset(A):
        return 0
    r1, r2 = _rho_vector(A, h1, numbering), _rho_vector(A, h2, numbering)
    return sum(r1[i] * r2[j] for i in range(4) for j in range(i + 1, 4)) & 1


def separating_configuration(A: Sequence[HClass]) -> Tuple[SymbolicGenerator, SymbolicGenerator]:
    """Two disjoint separating twists cutting off the first two handles of a completion of A."""
    from .homlattice import complete_symplectic_mod2

    basis = complete_symplectic_mod2([mod2(a) for a in A])
    d1_ = sep_twist([(basis[0], basis[3])], label="T_delta1")
    d2_ = sep_twist([(basis[1], basis[4])], label="T_delta2")
    return d1_, d2_


# ---------------------------------------------------------------- generator instances

@dataclass(frozen=True)
class GeneratorInstance:
    """A cell with named components and a tagged stabilizer word."""

    label: str
    components: Tuple[Component, ...]
    payload: Tuple[SymbolicGenerator, ...]
    x: HClass
    orbit_sign: int | None = None

    def term(self, coefficient: int = 1) -> LabeledTerm:
        return make_term(self.components, self.payload, self.orbit_sign, 1, coefficient)

    def with_payload(self, payload: Sequence[SymbolicGenerator], label: str | None = None) -> "GeneratorInstance":
        return GeneratorInstance(label or self.label, self.components, tuple(payload), self.x, self.orbit_sign)

    def with_orbit(self, s: int | None) -> "GeneratorInstance":
        return GeneratorInstance(self.label, self.components, self.payload, self.x, s)

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "components": [[n, list(v)] for n, v in self.components],
            "payload": [g.to_json() for g in self.payload],
            "x": list(self.x),
        }
        if self.orbit_sign is not None:
            out["orbit_sign"] = self.orbit_sign
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "GeneratorInstance":
        return cls(
            obj.get("label", ""),
            tuple((str(n), tuple(int(t) for t in v)) for n, v in obj["components"]),
            tuple(SymbolicGenerator.from_json(g) for g in obj["payload"]),
            tuple(int(t) for t in obj["x"]),
            obj.get("orbit_sign"),
        )


def _partner(s: int, orth: Sequence[int]) -> int:
    """Least mod-2 class t with t.s = 1 and t orthogonal to every class in orth."""
    for t in range(1, 1 << RANK):
        if intersection_mod2(t, s) == 1 and all(intersection_mod2(t, o) == 0 for o in orth):
            return t
    raise GeneratorError("no symplectic partner with the required orthogonality")


def _named(D: HMultiset) -> Tuple[Component, ...]:
    return tuple((f"c{i}", v) for i, v in enumerate(D))


def instances_for_cell(D: HMultiset, x: HClass) -> List[GeneratorInstance]:
    """Generator words with full tags on one 2-cell (five-element or bounding-pair)."""
    cell = classify(multiset(D))
    comps = _named(cell.multiset)
    names = [n for n, _ in comps]
    out: List[GeneratorInstance] = []
    if cell.tag == "H2prime":
        p = cell.principal
        (P,) = [n for n, v in comps if v == p]
        others = frozenset(n for n in names if n != P)
        mp = mod2(p)  # type: ignore[arg-type]
        u = next(v for v in range(1, 1 << RANK) if intersection_mod2(v, mp) == 0 and v != mp)
        t0 = _partner(u, [mp])
        for k in (0, 1):
            g = bp_twist(
                p, [(u, t0 ^ (mp if k else 0))], label=f"T[{P}',{P}]_{k}",
                pair=(f"{P}'", P), disjoint=others, projection=p,
            )
            out.append(GeneratorInstance(f"H2prime/BPTwist{k}", comps, (g,), x, 1))
        s_side = [(u, t0)]
        g = sep_twist(s_side, label="T_delta", genus1_side=others, genus2_side=frozenset({P}), projection=p)
        out.append(GeneratorInstance("H2prime/SepTwist", comps, (g,), x, 1))
    elif cell.tag == "H2_boundingpair":
        c = cell.repeated
        ip = [i for i, v in enumerate(cell.multiset) if v == c]
        plus, minus = names[ip[0]], names[ip[1]]
        C = list(cell.multiset)
        C.remove(c)  # type: ignore[arg-type]
        face = classify(multiset(C))
        if face.tag != "H1_type2":
            raise TaxonomyError("bounding-pair cell without a type-2 face")
        s = face.special
        nonspecial = [v for v in face.multiset if v != s]
        ms = mod2(s)  # type: ignore[arg-type]
        t = _partner(ms, [mod2(v) for v in nonspecial])
        (S,) = [n for n, v in comps if v == s]
        rest = frozenset(n for n in names if n != S)
        g_bp = bp_twist(
            c, [(ms, t)], label=f"T[{plus},{minus}]",
            pair=(plus, minus), disjoint=frozenset(n for n in names if n not in (plus, minus)),
            projection=c,
        )
        g_sep = sep_twist(
            [(ms, t)], label="T_delta", genus1_side=frozenset({S}), genus2_side=rest,
            lantern=tuple(nonspecial),
        )
        out.append(GeneratorInstance("H2_boundingpair/BPTwist", comps, (g_bp,), x, None))
        out.append(GeneratorInstance("H2_boundingpair/SepTwist", comps, (g_sep,), x, None))
    else:
        raise TaxonomyError(f"no generator instances for {cell.tag} cells")
    return out


def two_cells_over(A: Sequence[HClass], x: HClass) -> List[HMultiset]:
    """Certified 2-cells (five elements, with or without a bounding pair) inside the 102 family of A."""
    out: Dict[HMultiset, None] = {}
    for E in supersets_in_H(A, x):
        for sel in itertools.combinations(range(len(E)), 5):
            D = tuple(E[i] for i in sel)
            if D in out or dimension(D) != 2 or not satisfies_M_conditions(D, x):
                continue
            if classify(D).tag in ("H2prime", "H2_boundingpair"):
                out[D] = None
    return sorted(out)


def generator_instances(A: Sequence[HClass], x: HClass) -> List[GeneratorInstance]:
    out: List[GeneratorInstance] = []
    for D in two_cells_over(A, x):
        out.extend(instances_for_cell(D, x))
    return out


# ---------------------------------------------------------------- identity checks

@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    C: HMultiset
    c: HClass | None
    lhs: Any
    rhs: Any

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        def enc(v):
            return v.to_json() if isinstance(v, BPrimeElement) else v

        return {
            "identity": self.identity,
            "C": [list(v) for v in self.C],
            "c": list(self.c) if self.c is not None else None,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "ok": self.ok,
        }


@dataclass
class IdentityReport:
    instance: str
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {"instance": self.instance, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def check_d1_identities(inst: GeneratorInstance, signs: SignTable = DEFAULT_SIGNS) -> IdentityReport:
    """Evaluate both sides of the sigma_C, sigma_{C,c} and nu_{C,c} identities on d1 [h]_K."""
    y = chain(inst.term())
    K = y.terms[0].cell
    D = K.multiset
    dy = d1(y, inst.x, signs)
    report = IdentityReport(inst.label)
    seen = []
    for t in dy.terms:
        if t.multiset not in seen:
            seen.append(t.multiset)
    for C in seen:
        F = classify(C)
        if F.tag in ("H1_type1", "H1_type2"):
            rhs = sigma_C(y, D) if K.tag == "H2prime" else ZERO
            report.checks.append(IdentityCheck("sigma_C", C, None, sigma_C(dy, C), rhs))
        if F.tag != "H1_type2":
            continue
        for c in sorted(set(C)):
            if c == F.special:
                continue
            principal = K.tag == "H2prime" and K.principal == c
            rhs_s = sigma_C(y, D) if principal else ZERO
            report.checks.append(IdentityCheck("sigma_Cc", C, c, sigma_Cc(dy, C, c), rhs_s))
            rhs_n = 0
            if principal:
                rhs_n = signs.eps(D, C) * signs.D_C(D, C) * nu_D(y, D)
            elif K.tag == "H2_boundingpair":
                rhs_n = 2 * signs.D_C(D, C) * mu_C(y, D)
            report.checks.append(IdentityCheck("nu_Cc", C, c, nu_Cc(dy, C, c), rhs_n))
    return report


def random_instance_word(inst: GeneratorInstance, rng: random.Random, length: int = 3) -> GeneratorInstance:
    """A random word in the instance generators (with exponents) on the same cell."""
    letters = [g.power(rng.choice((-2, -1, 1, 2, 3))) for g in (rng.choice(inst.payload) for _ in range(length))]
    return inst.with_payload(letters, inst.label + "/word")


# ---------------------------------------------------------------- d1 o d1 on the cell lattice

def cellular_boundary(
    components: Sequence[Component], x: HClass, signs: SignTable = DEFAULT_SIGNS
) -> Dict[Tuple[Component, ...], int]:
    """Boundary of a named cell as a map from named faces to incidence signs."""
    comps = tuple(components)
    out: Dict[Tuple[Component, ...], int] = {}
    for R in face_removals(comps, x):
        rest = tuple(c for i, c in enumerate(comps) if i not in R)
        out[rest] = out.get(rest, 0) + signs.incidence(comps, R)
    return out


def d1_squared(components: Sequence[Component], x: HClass, signs: SignTable = DEFAULT_SIGNS) -> Dict[Tuple[Component, ...], int]:
    """Coefficients of d d of a named 2-cell; all zero when the lattice is coherent."""
    total: Dict[Tuple[Component, ...], int] = {}
    for F, a in cellular_boundary(components, x, signs).items():
        for G, b in cellular_boundary(F, x, signs).items():
            total[G] = total.get(G, 0) + a * b
    return {k: v for k, v in total.items() if v}


@dataclass
class SquareReport:
    cells: int = 0
    failures: List[Tuple[Component, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def d1_squared_over(A: Sequence[HClass], x: HClass, signs: SignTable = DEFAULT_SIGNS) -> SquareReport:
    """Check d d = 0 on every named 2-cell inside each member of the 102 family of A."""
    rep = SquareReport()
    seen = set()
    for E in supersets_in_H(A, x):
        named = tuple((f"e{i}", v) for i, v in enumerate(E))
        for size in range(3, len(E)):
            for sel in itertools.combinations(range(len(E)), size):
                comps = sort_components(named[i] for i in sel)
                key = tuple(v for _, v in comps), tuple(
                    i for i in range(len(comps) - 1) if comps[i][1] == comps[i + 1][1]
                )
                if key in seen:
                    continue
                C = multiset(v for _, v in comps)
                if dimension(C) != 2 or not satisfies_M_conditions(C, x):
                    continue
                seen.add(key)
                rep.cells += 1
                if d1_squared(comps, x, signs):
                    rep.failures.append(comps)
    return rep


__all__ = [
    "ChainError", "Component", "DEFAULT_SIGNS", "E1Chain", "GeneratorInstance",
    "IdentityCheck", "IdentityReport", "LabeledTerm", "SignTable", "SquareReport", "Theta_A",
    "cellular_boundary", "chain", "check_d1_identities", "d1", "d1_squared", "d1_squared_over",
    "face_removals", "face_terms", "generator_instances", "geometric_incidence", "instances_for_cell",
    "make_term", "mu_C", "nu_CA", "nu_Cc", "nu_D", "nu_plus", "nu_plus_Cc",
    "random_instance_word", "relation_basis", "separating_configuration", "sigma_C",
    "sigma_Cc", "sigma_projection", "sort_components", "theta_pairing", "two_cells_over",
]
