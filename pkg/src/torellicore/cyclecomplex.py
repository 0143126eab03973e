"""Cells of the complex of cycles for a fixed primitive class x, read homologically.

A multiset of classes is a sorted tuple of ``HClass``.  Membership in the
cell set is certified only through the explicit characterizations: the
isotropic-summand criterion for vertex sets and the 102 maximal multisets
containing a Lagrangian vertex set.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .homlattice import (
    GENUS,
    RANK,
    HClass,
    HomologyError,
    add,
    combo,
    det,
    is_isotropic_direct_summand,
    is_primitive,
    neg,
    solve_rational,
    sub,
)

HMultiset = Tuple[HClass, ...]

TAGS = (
    "H0",
    "H0prime",
    "H1_type1",
    "H1_type2",
    "H1_boundingpair",
    "H1_lowrank",
    "H2prime",
    "H2_lowrank",
    "H2_boundingpair",
    "H3",
    "other",
)


class TaxonomyError(ValueError):
    """Input lies outside the characterized cell families."""


def multiset(classes: Iterable[HClass]) -> HMultiset:
    return tuple(sorted(map(tuple, classes)))  # type: ignore[arg-type]


def multiset_to_json(m: HMultiset) -> List[List[int]]:
    return [list(v) for v in m]


def multiset_from_json(obj: Sequence[Sequence[int]]) -> HMultiset:
    return multiset(tuple(int(c) for c in v) for v in obj)


def check_multiset(m: HMultiset) -> None:
    counts: Dict[HClass, int] = {}
    for v in m:
        if not any(v):
            raise TaxonomyError("multiset contains the zero class")
        counts[v] = counts.get(v, 0) + 1
    if any(c > 2 for c in counts.values()):
        raise TaxonomyError("multiplicity above 2")
    if sum(1 for c in counts.values() if c == 2) > 1:
        raise TaxonomyError("more than one repeated class")


def duplicated(m: HMultiset) -> HClass | None:
    for u, v in zip(m, m[1:]):
        if u == v:
            return u
    return None


def distinct(m: HMultiset) -> Tuple[HClass, ...]:
    return tuple(sorted(set(m)))


# ---------------------------------------------------------------- ranks and relations

@functools.lru_cache(maxsize=1 << 20)
def int_rank(vs: Tuple[HClass, ...]) -> int:
    """Rank over Q by fraction-free elimination."""
    rows = [list(v) for v in vs]
    r = 0
    for col in range(RANK):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [p * x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rank_of(m: Sequence[HClass]) -> int:
    return int_rank(tuple(m)) if m else 0


def dimension(m: HMultiset) -> int:
    """Cell dimension |M| - rank M."""
    return len(m) - rank_of(m)


def _pivot_coords(vs: Sequence[HClass], r: int) -> Tuple[int, ...]:
    """r coordinates on which the span of ``vs`` projects injectively."""
    for cols in itertools.combinations(range(RANK), r):
        for rows in itertools.combinations(vs, r):
            if det([[v[c] for c in cols] for v in rows]):
                return cols
    raise HomologyError("rank deficiency")  # pragma: no cover


def relation_of_four(vs: Sequence[HClass]) -> Tuple[int, ...]:
    """Primitive integer relation of 4 classes of rank 3 (sign: first nonzero > 0)."""
    cols = _pivot_coords(vs, 3)
    proj = [[v[c] for c in cols] for v in vs]
    rel = []
    for i in range(4):
        minor = [[proj[j][r] for j in range(4) if j != i] for r in range(3)]
        rel.append((-1) ** i * det(minor))
    from math import gcd

    g = gcd(*rel)
    rel = [r // g for r in rel]
    lead = next(r for r in rel if r)
    if lead < 0:
        rel = [-r for r in rel]
    return tuple(rel)


def _unit_relation_of_three(vs: Sequence[HClass]) -> Tuple[int, int, int] | None:
    """A relation with entries +-1 among 3 classes, if one exists."""
    for s1, s2 in itertools.product((1, -1), repeat=2):
        if not any(p + s1 * q + s2 * r for p, q, r in zip(*vs)):
            return (1, s1, s2)
    return None


# ---------------------------------------------------------------- vertex sets

def _as_multiset(A: Iterable[HClass]) -> HMultiset:
    return multiset(A)


def h0_coefficients(A: Sequence[HClass], x: HClass) -> Tuple[int, ...] | None:
    """Positive integers n with x = sum n_i a_i, if A is a vertex set for x."""
    return _h0_coefficients(tuple(tuple(a) for a in A), tuple(x))


@functools.lru_cache(maxsize=1 << 20)
def _h0_coefficients(A: Tuple[HClass, ...], x: HClass) -> Tuple[int, ...] | None:
    if not is_primitive(x):
        raise HomologyError("x is not primitive")
    if not 1 <= len(A) <= GENUS or len(set(A)) != len(A):
        return None
    q = solve_rational(A, x)
    if q is None or any(c <= 0 or c.denominator != 1 for c in q):
        return None
    if not is_isotropic_direct_summand(A):
        return None
    return tuple(int(c) for c in q)


def is_in_H0(A: Sequence[HClass], x: HClass) -> bool:
    return h0_coefficients(A, x) is not None


def is_in_H0prime(A: Sequence[HClass], x: HClass) -> bool:
    return len(A) == GENUS and is_in_H0(A, x)


@dataclass(frozen=True)
class WeightN:
    n: int
    coefficients: Tuple[int, ...]


def n_weight(A: Sequence[HClass], x: HClass) -> WeightN:
    if len(A) != GENUS:
        raise TaxonomyError("weight needs a 3-element vertex set")
    n = h0_coefficients(A, x)
    if n is None:
        raise TaxonomyError("set is not a Lagrangian vertex set for x")
    return WeightN(sum(n), n)


# ---------------------------------------------------------------- the 102 maximal multisets

PERMS = tuple(itertools.permutations(range(3)))
SIGNS = (1, -1)


def _families(A: Sequence[HClass]) -> List[List[HMultiset]]:
    a = list(A)

    def L(*terms: Tuple[int, int]) -> HClass:
        return combo([c for c, _ in terms], [a[i] for _, i in terms])

    base = [a[0], a[1], a[2]]
    s = add(a[0], a[1], a[2])
    fams: List[List[HMultiset]] = [[] for _ in range(14)]
    for i, j, k in PERMS:
        fams[0].append(multiset(base + [L((1, i), (1, j)), L((1, j), (1, k)), s]))
        for e in SIGNS:
            fams[1].append(
                multiset(base + [L((1, i), (1, j)), L((1, k), (-1, j)), L((e, i), (e, j), (-e, k))])
            )
        fams[2].append(
            multiset(base + [L((1, i), (1, j)), L((1, j), (-1, k)), L((1, i), (1, j), (-1, k))])
        )
        for e1, e2 in itertools.product(SIGNS, repeat=2):
            fams[3].append(
                multiset(base + [L((e1, i), (-e1, k)), L((e2, j), (-e2, k)), L((1, i), (1, j), (-1, k))])
            )
        fams[4].append(
            multiset(base + [L((1, k), (-1, i)), L((1, k), (-1, j)), L((1, k), (-1, i), (-1, j))])
        )
        fams[5].append(multiset(base + [L((1, i), (1, j)), L((1, j), (1, k)), L((1, i), (-1, k))]))
        fams[6].append(multiset(base + [L((1, i), (-1, j)), L((1, j), (-1, k)), L((1, i), (-1, k))]))
        fams[7].append(multiset(base + [L((1, i), (1, j))] * 2 + [s]))
        for e in SIGNS:
            fams[8].append(multiset(base + [L((1, i), (1, j))] * 2 + [L((e, i), (e, j), (-e, k))]))
            fams[9].append(multiset(base + [L((1, i), (-1, j))] * 2 + [L((-e, i), (e, j), (e, k))]))
        fams[10].append(multiset(base + [L((1, i), (-1, j))] * 2 + [L((1, i), (-1, j), (1, k))]))
        fams[11].append(multiset([a[i], a[i], a[j], a[k], L((1, i), (1, j)), L((1, i), (1, k))]))
        for e in SIGNS:
            fams[12].append(
                multiset([a[i], a[i], a[j], a[k], L((1, i), (1, j)), L((e, i), (-e, k))])
            )
        for e1, e2 in itertools.product(SIGNS, repeat=2):
            fams[13].append(
                multiset([a[i], a[i], a[j], a[k], L((e1, i), (-e1, j)), L((e2, i), (-e2, k))])
            )
    return [list(dict.fromkeys(f)) for f in fams]


FAMILY_COUNTS = (3, 12, 6, 12, 3, 6, 6, 3, 6, 12, 6, 3, 12, 12)


def superset_families(A: Sequence[HClass]) -> List[List[HMultiset]]:
    """The 14 parametric families instantiated on A (deduplicated within each)."""
    return _families(A)


@functools.lru_cache(maxsize=4096)
def _supersets_cached(A: Tuple[HClass, ...]) -> Tuple[HMultiset, ...]:
    out: Dict[HMultiset, None] = {}
    for fam in _families(A):
        for m in fam:
            out.setdefault(m, None)
    return tuple(sorted(out))


def supersets_in_H(A: Sequence[HClass], x: HClass) -> List[HMultiset]:
    """The 102 maximal multisets of the cell set that contain A."""
    if not is_in_H0prime(A, x):
        raise TaxonomyError("A is not a Lagrangian vertex set for x")
    return list(_supersets_cached(tuple(A)))


# ---------------------------------------------------------------- membership relative to a certified cell

def sub_multisets(D: HMultiset, size: int | None = None) -> List[HMultiset]:
    """Distinct sub-multisets of D (optionally of one size), deduplicated."""
    idx = range(len(D))
    sizes = [size] if size is not None else range(1, len(D) + 1)
    out: Dict[HMultiset, None] = {}
    for s in sizes:
        for sel in itertools.combinations(idx, s):
            out.setdefault(tuple(D[i] for i in sel), None)
    return list(out)


def is_submultiset(C: HMultiset, D: HMultiset) -> bool:
    rest = list(D)
    for v in C:
        try:
            rest.remove(v)
        except ValueError:
            return False
    return True


@functools.lru_cache(maxsize=1 << 20)
def _basic_support(S: Tuple[HClass, ...], x: HClass) -> bool:
    """S independent and x a strictly positive integer combination of S."""
    if int_rank(S) != len(S):
        return False
    q = solve_rational(S, x)
    return q is not None and all(c > 0 and c.denominator == 1 for c in q)


def has_one_sided_relation(C: HMultiset) -> bool:
    n = len(C)
    for mask in range(1, 1 << n):
        s = [0] * RANK
        for i in range(n):
            if mask >> i & 1:
                for t in range(RANK):
                    s[t] += C[i][t]
        if not any(s):
            return True
    return False


@functools.lru_cache(maxsize=1 << 20)
def satisfies_M_conditions(C: HMultiset, x: HClass) -> bool:
    """True when every element lies in a basic cycle for ``x`` and no one-sided relation holds."""
    if has_one_sided_relation(C):
        return False
    elems = distinct(C)
    for c in elems:
        others = [e for e in elems if e != c]
        ok = False
        for r in range(0, GENUS):
            for rest in itertools.combinations(others, r):
                if _basic_support((c,) + rest, x):
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
    return True


def is_in_M_relative(C: HMultiset, D: HMultiset, x: HClass) -> bool:
    """Membership of C given a certified realizable D containing it."""
    C, D = multiset(C), multiset(D)
    if not is_submultiset(C, D):
        raise TaxonomyError("C is not contained in D")
    return satisfies_M_conditions(C, x)


# ---------------------------------------------------------------- classification

@dataclass(frozen=True)
class CellClass:
    multiset: HMultiset
    tag: str
    dim: int
    special: HClass | None = None
    principal: HClass | None = None
    repeated: HClass | None = None
    relations: Tuple[Tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        out = {"multiset": multiset_to_json(self.multiset), "tag": self.tag, "dim": self.dim}
        for k in ("special", "principal", "repeated"):
            v = getattr(self, k)
            if v is not None:
                out[k] = list(v)
        return out


@functools.lru_cache(maxsize=1 << 20)
def classify(C: HMultiset) -> CellClass:
    C = multiset(C)
    check_multiset(C)
    r = rank_of(C)
    dim = len(C) - r
    dup = duplicated(C)
    if dim < 0:  # pragma: no cover
        raise TaxonomyError("impossible dimension")
    if dim == 0:
        if dup is not None:
            raise TaxonomyError("outside characterized taxonomy")
        return CellClass(C, "H0prime" if len(C) == GENUS else "H0", 0)
    if dup is not None and dim in (1, 2):
        return CellClass(C, f"H{dim}_boundingpair", dim, repeated=dup)
    if r != GENUS:
        # fewer components than a Lagrangian cell of the same dimension; such
        # cells occur as faces that drop several components at once
        if dim in (1, 2):
            return CellClass(C, f"H{dim}_lowrank", dim)
        return CellClass(C, "other", dim, repeated=dup)
    if dim == 1:
        rel = relation_of_four(C)
        if any(abs(v) > 1 for v in rel):
            return CellClass(C, "other", 1, relations=(rel,))
        zeros = [i for i, v in enumerate(rel) if v == 0]
        if not zeros:
            return CellClass(C, "H1_type1", 1, relations=(rel,))
        if len(zeros) == 1:
            return CellClass(C, "H1_type2", 1, special=C[zeros[0]], relations=(rel,))
        return CellClass(C, "other", 1, relations=(rel,))
    if dim == 2:
        triples = []
        for sel in itertools.combinations(range(5), 3):
            vs = [C[i] for i in sel]
            if int_rank(tuple(vs)) == 2:
                u = _unit_relation_of_three(vs)
                if u is None:
                    return CellClass(C, "other", 2)
                rel = [0] * 5
                for i, c in zip(sel, u):
                    rel[i] = c
                triples.append((set(sel), tuple(rel)))
        if len(triples) == 2:
            common = triples[0][0] & triples[1][0]
            if len(common) == 1:
                (p,) = common
                return CellClass(
                    C, "H2prime", 2, principal=C[p], relations=tuple(t[1] for t in triples)
                )
        return CellClass(C, "other", 2)
    if dim == 3:
        return CellClass(C, "H3", 3, repeated=dup)
    raise TaxonomyError("outside characterized taxonomy")


# ---------------------------------------------------------------- certified lattices

def find_vertex_subset(C: HMultiset, x: HClass) -> Tuple[HClass, ...]:
    """Some 3-element Lagrangian vertex set contained in C (deterministic)."""
    for sel in itertools.combinations(distinct(C), GENUS):
        if is_in_H0prime(sel, x):
            return sel
    raise TaxonomyError("outside characterized taxonomy: no Lagrangian vertex subset")


def certifying_supersets(C: HMultiset, x: HClass) -> List[HMultiset]:
    """Members of a 102-lattice through a vertex subset of C that contain C."""
    A = find_vertex_subset(C, x)
    return [E for E in _supersets_cached(tuple(A)) if is_submultiset(C, E)]


def _pattern_index() -> FrozenSet[HMultiset]:
    """Sub-multisets of the maximal multisets, in coordinates over the vertex set.

    The maximal multisets through A are fixed integer combinations of the
    elements of A, closed under reordering A, so one index built over the
    standard basis serves every vertex set.
    """
    e = [tuple(1 if i == t else 0 for i in range(RANK)) for t in range(GENUS)]
    out = set()
    for E in _supersets_cached(tuple(e)):
        coords = [v[:GENUS] for v in E]
        for size in range(1, len(coords) + 1):
            for sel in itertools.combinations(coords, size):
                out.add(tuple(sorted(sel)))
    return frozenset(out)


_PATTERNS: FrozenSet[HMultiset] | None = None


def _patterns() -> FrozenSet[HMultiset]:
    global _PATTERNS
    if _PATTERNS is None:
        _PATTERNS = _pattern_index()
    return _PATTERNS


@functools.lru_cache(maxsize=1 << 20)
def _coords(A: Tuple[HClass, ...], v: HClass) -> Tuple[int, ...] | None:
    q = solve_rational(A, v)
    if q is None or any(c.denominator != 1 for c in q):
        return None
    return tuple(int(c) for c in q)


def in_lattice_of(C: HMultiset, A: Sequence[HClass]) -> bool:
    """C is contained in one of the maximal multisets through A."""
    A = tuple(A)
    coords = []
    for v in C:
        c = _coords(A, v)
        if c is None:
            return False
        coords.append(c)
    return tuple(sorted(coords)) in _patterns()


def is_certified(C: HMultiset, x: HClass) -> bool:
    C = multiset(C)
    try:
        A = find_vertex_subset(C, x)
    except TaxonomyError:
        return False
    return in_lattice_of(C, A) and satisfies_M_conditions(C, x)


def faces(D: HMultiset, x: HClass) -> List[CellClass]:
    """Codimension-one faces of a certified cell, at the multiset level."""
    D = multiset(D)
    if not is_certified(D, x):
        raise TaxonomyError("cell is not certified")
    d = dimension(D)
    out = []
    for size in range(1, len(D)):
        for C in sub_multisets(D, size):
            if dimension(C) == d - 1 and satisfies_M_conditions(C, x):
                out.append(classify(C))
    return sorted(out, key=lambda c: c.multiset)


def h2prime_containing_direct(S: Sequence[HClass], x: HClass) -> List[HMultiset]:
    """Five-element cells with two pants relations containing S, read off the lattice."""
    S = multiset(S)
    out: Dict[HMultiset, None] = {}
    for E in certifying_supersets(S, x):
        for D in sub_multisets(E, 5):
            if duplicated(D) is None and is_submultiset(S, D) and D not in out:
                if classify(D).tag == "H2prime" and satisfies_M_conditions(D, x):
                    out[D] = None
    return sorted(out)


@functools.lru_cache(maxsize=None)
def _h2prime_candidates() -> Tuple[HMultiset, ...]:
    """Five-element cells with two pants relations through the standard basis.

    Only the cell conditions depend on x, so this list is shared by all x.
    """
    e = tuple(tuple(1 if i == t else 0 for i in range(RANK)) for t in range(GENUS))
    out: Dict[HMultiset, None] = {}
    for E in _supersets_cached(e):
        for D in sub_multisets(E, 5):
            if duplicated(D) is None and is_submultiset(e, D) and D not in out:
                if classify(D).tag == "H2prime":
                    out[D] = None
    return tuple(sorted(out))


@functools.lru_cache(maxsize=4096)
def _h2prime_patterns(n: Tuple[int, ...]) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Coordinate patterns over A of the five-element cells through A.

    Every condition involved (ranks, unit relations, one-sided relations,
    positive basic supports) is preserved by the isomorphism Z^3 -> span(A)
    sending the standard basis to A, so the patterns depend only on the
    coefficients n of x over A.
    """
    xs = tuple(n) + (0,) * (RANK - GENUS)
    return tuple(
        tuple(v[:GENUS] for v in D)
        for D in _h2prime_candidates()
        if satisfies_M_conditions(D, xs)
    )


@functools.lru_cache(maxsize=1 << 16)
def _h2prime_through(A: Tuple[HClass, ...], x: HClass) -> Tuple[HMultiset, ...]:
    n = h0_coefficients(A, x)
    if n is None or len(A) != GENUS:
        raise TaxonomyError("A is not a Lagrangian vertex set for x")
    return tuple(sorted(multiset(combo(c, A) for c in pat) for pat in _h2prime_patterns(n)))


@functools.lru_cache(maxsize=1 << 16)
def _h2prime_through_set(A: Tuple[HClass, ...], x: HClass) -> FrozenSet[HMultiset]:
    return frozenset(_h2prime_through(A, x))


def h2prime_containing(S: Sequence[HClass], x: HClass) -> List[HMultiset]:
    """All five-element cells with two pants relations that contain S."""
    S = multiset(S)
    A = find_vertex_subset(S, x)
    return [D for D in _h2prime_through(tuple(A), tuple(x)) if is_submultiset(S, D)]


@functools.lru_cache(maxsize=1 << 20)
def _h2prime_cell(D: HMultiset, x: HClass) -> bool:
    if len(D) != 5 or duplicated(D) is not None:
        return False
    try:
        A = find_vertex_subset(D, x)
    except TaxonomyError:
        return False
    A = tuple(A)
    n = h0_coefficients(A, x)
    coords = []
    for v in D:
        c = _coords(A, v)
        if c is None:
            return False
        coords.append(c)
    return tuple(sorted(coords)) in _h2prime_pattern_set(n)


@functools.lru_cache(maxsize=4096)
def _h2prime_pattern_set(n: Tuple[int, ...]) -> FrozenSet[Tuple[Tuple[int, ...], ...]]:
    return frozenset(tuple(sorted(p)) for p in _h2prime_patterns(n))


def is_h2prime_cell(D: Iterable[HClass], x: HClass) -> bool:
    """Certified five-element cell with two pants relations."""
    return _h2prime_cell(multiset(D), x)


@functools.lru_cache(maxsize=1 << 20)
def _extensions(C: HMultiset, x: HClass) -> Tuple[HMultiset, ...]:
    out: Dict[HMultiset, None] = {}
    for u, v in itertools.combinations(distinct(C), 2):
        for e in (add(u, v), sub(u, v), sub(v, u), neg(add(u, v))):
            D = multiset(C + (e,))
            if D not in out and _h2prime_cell(D, x):
                out[D] = None
    return tuple(sorted(out))


def h2prime_extensions(C: Iterable[HClass], x: HClass) -> List[HMultiset]:
    """Certified five-element cells C + {e} over a four-element multiset C.

    Each element of such a cell lies in a three-term unit relation, so the
    new element is one of +-c +- c' for two elements of C.  Unlike
    ``h2prime_containing`` this does not need a vertex subset inside C.
    """
    C = multiset(C)
    if len(C) != 4:
        raise TaxonomyError("extensions are taken over four-element multisets")
    return list(_extensions(C, x))


def is_cell_via_extension(C: Iterable[HClass], x: HClass) -> bool:
    """C satisfies the cell conditions and lies in a certified five-element cell."""
    C = multiset(C)
    return bool(h2prime_extensions(C, x)) and satisfies_M_conditions(C, x)


def h2prime_supersets_of_vertex_set(A: Sequence[HClass], x: HClass) -> List[HMultiset]:
    if not is_in_H0prime(A, x):
        raise TaxonomyError("A is not a Lagrangian vertex set for x")
    return list(_h2prime_through(tuple(tuple(a) for a in A), tuple(x)))


def contains_any(D: HMultiset, sets: Iterable[Sequence[HClass]]) -> bool:
    return any(is_submultiset(multiset(s), D) for s in sets)


def flip(m: HMultiset) -> HMultiset:
    return multiset(neg(v) for v in m)


__all__ = [
    "CellClass", "FAMILY_COUNTS", "HMultiset", "TAGS", "TaxonomyError", "WeightN",
    "certifying_supersets", "check_multiset", "classify", "contains_any", "dimension",
    "distinct", "duplicated", "faces", "find_vertex_subset", "flip", "h0_coefficients",
    "h2prime_containing", "h2prime_containing_direct", "h2prime_extensions", "in_lattice_of", "h2prime_supersets_of_vertex_set",
    "is_cell_via_extension", "is_h2prime_cell", "has_one_sided_relation",
    "int_rank", "is_certified", "is_in_H0", "is_in_H0prime", "is_in_M_relative",
    "is_submultiset", "multiset", "multiset_from_json", "multiset_to_json", "n_weight",
    "rank_of", "relation_of_four", "satisfies_M_conditions", "sub_multisets",
    "superset_families", "supersets_in_H",
]
