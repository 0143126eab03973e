"""Integral and mod-2 homology of a closed genus-3 surface.

Classes are written in the fixed symplectic basis (a1, a2, a3, b1, b2, b3)
with a_i . b_j = delta_ij and all other basis pairings zero.

* ``HClass`` is a 6-tuple of ints.
* ``Mod2Class`` is an int whose bit ``k`` is the coefficient of the k-th basis
  vector (a1 is bit 0, b3 is bit 5).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

HClass = Tuple[int, int, int, int, int, int]
Mod2Class = int

GENUS = 3
RANK = 2 * GENUS
BASIS_NAMES = ("a1", "a2", "a3", "b1", "b2", "b3")
A_MASK = 0b000111
B_MASK = 0b111000


class HomologyError(ValueError):
    """Invalid homological input."""


def hclass(*coords: int) -> HClass:
    if len(coords) == 1 and not isinstance(coords[0], int):
        coords = tuple(coords[0])
    if len(coords) != RANK:
        raise HomologyError(f"expected {RANK} coordinates, got {len(coords)}")
    return tuple(int(c) for c in coords)  # type: ignore[return-value]


def basis_vector(name: str) -> HClass:
    k = BASIS_NAMES.index(name)
    return tuple(1 if i == k else 0 for i in range(RANK))  # type: ignore[return-value]


ZERO: HClass = (0,) * RANK  # type: ignore[assignment]
a1, a2, a3, b1, b2, b3 = (basis_vector(n) for n in BASIS_NAMES)


def add(*vs: HClass) -> HClass:
    return tuple(sum(c) for c in zip(*vs))  # type: ignore[return-value]


def sub(u: HClass, v: HClass) -> HClass:
    return tuple(p - q for p, q in zip(u, v))  # type: ignore[return-value]


def neg(u: HClass) -> HClass:
    return tuple(-p for p in u)  # type: ignore[return-value]


def scale(k: int, u: HClass) -> HClass:
    return tuple(k * p for p in u)  # type: ignore[return-value]


def combo(coeffs: Sequence[int], vs: Sequence[HClass]) -> HClass:
    out = [0] * RANK
    for c, v in zip(coeffs, vs):
        for i in range(RANK):
            out[i] += c * v[i]
    return tuple(out)  # type: ignore[return-value]


def intersection(u: HClass, v: HClass) -> int:
    """Symplectic pairing u . v = sum_i (p_i(u) q_i(v) - q_i(u) p_i(v))."""
    return sum(u[i] * v[i + GENUS] - u[i + GENUS] * v[i] for i in range(GENUS))


def is_primitive(u: HClass) -> bool:
    if not any(u):
        raise HomologyError("zero class")
    return math.gcd(*u) == 1


# ---------------------------------------------------------------- exact linear algebra

def det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(vs: Sequence[HClass]) -> int:
    """Rank over Q of a family of classes."""
    rows = [[Fraction(c) for c in v] for v in vs]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [p - f * q for p, q in zip(rows[i], rows[r])]
        r += 1
    return r


def _small_det(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    return det(m)


def solve_rational(vs: Sequence[HClass], target: HClass) -> List[Fraction] | None:
    """Coefficients q with sum q_i v_i = target for independent ``vs``, or None.

    Cramer's rule on the first nonzero maximal minor, then an exact check of
    every coordinate.
    """
    k = len(vs)
    if k == 0:
        return [] if not any(target) else None
    for cols in itertools.combinations(range(RANK), k):
        # rows of the square system are coordinates, columns are the vectors
        m = [[vs[j][c] for j in range(k)] for c in cols]
        d = _small_det(m)
        if d == 0:
            continue
        num = []
        for j in range(k):
            mj = [row[:j] + [target[c]] + row[j + 1:] for row, c in zip(m, cols)]
            num.append(_small_det(mj))
        for c in range(RANK):
            if sum(num[j] * vs[j][c] for j in range(k)) != d * target[c]:
                return None
        return [Fraction(t, d) for t in num]
    return None


def maximal_minor_gcd(vs: Sequence[HClass]) -> int:
    """gcd of all k x k minors of the k x 6 coordinate matrix (0 if dependent)."""
    k = len(vs)
    g = 0
    for cols in itertools.combinations(range(RANK), k):
        g = math.gcd(g, _small_det([[v[c] for c in cols] for v in vs]))
        if g == 1:
            return 1
    return g


def is_isotropic_direct_summand(S: Sequence[HClass]) -> bool:
    """Independent, pairwise orthogonal, and spanning a direct summand of Z^6."""
    if len(S) > GENUS:
        raise HomologyError("at most 3 classes span an isotropic subgroup in genus 3")
    if not S:
        raise HomologyError("empty family")
    for u, v in itertools.combinations(S, 2):
        if intersection(u, v) != 0:
            return False
    return maximal_minor_gcd(S) == 1


# ---------------------------------------------------------------- mod 2

def mod2(u: HClass) -> Mod2Class:
    return sum(1 << i for i, c in enumerate(u) if c & 1)


def mod2_basis(name: str) -> Mod2Class:
    return 1 << BASIS_NAMES.index(name)


def intersection_mod2(u: Mod2Class, v: Mod2Class) -> int:
    """Mod-2 symplectic pairing of bit-encoded classes."""
    t = ((u & A_MASK) & (v >> GENUS)) ^ ((u >> GENUS) & (v & A_MASK))
    return bin(t).count("1") & 1


def mod2_to_str(u: Mod2Class) -> str:
    return "".join("1" if (u >> i) & 1 else "0" for i in range(RANK))


def mod2_from_str(s: str) -> Mod2Class:
    if len(s) != RANK or set(s) - {"0", "1"}:
        raise HomologyError(f"bad mod-2 class string {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def mod2_name(u: Mod2Class) -> str:
    if u == 0:
        return "0"
    return "+".join(BASIS_NAMES[i] for i in range(RANK) if (u >> i) & 1)


def mod2_independent(vs: Iterable[Mod2Class]) -> bool:
    vs = list(vs)
    from .gf2 import rank as gf2_rank

    return gf2_rank(vs) == len(vs)


def check_symplectic_basis(basis: Sequence[Mod2Class]) -> bool:
    """Gram conditions a_i.a_j = b_i.b_j = 0, a_i.b_j = delta_ij."""
    if len(basis) != RANK:
        return False
    a, b = basis[:GENUS], basis[GENUS:]
    for i in range(GENUS):
        for j in range(GENUS):
            if intersection_mod2(a[i], a[j]) or intersection_mod2(b[i], b[j]):
                return False
            if intersection_mod2(a[i], b[j]) != (1 if i == j else 0):
                return False
    return True


STANDARD_BASIS_MOD2: Tuple[Mod2Class, ...] = tuple(1 << i for i in range(RANK))


def complete_symplectic_mod2(A: Sequence[Mod2Class]) -> Tuple[Mod2Class, ...]:
    """Extend independent pairwise-orthogonal (a1, a2, a3) to a symplectic basis.

    Chooses b1, then b2, then b3 as the least ints satisfying the remaining
    Gram conditions.  A dual completion always exists at every stage, so this
    greedy choice is the lexicographically least completion.
    """
    A = tuple(int(v) for v in A)
    if len(A) != GENUS:
        raise HomologyError("need exactly 3 classes")
    if not mod2_independent(A):
        raise HomologyError("classes are dependent over Z/2")
    for u, v in itertools.combinations(A, 2):
        if intersection_mod2(u, v):
            raise HomologyError("classes are not pairwise orthogonal")
    bs: List[Mod2Class] = []
    for i in range(GENUS):
        for cand in range(1, 1 << RANK):
            if any(intersection_mod2(A[j], cand) != (1 if i == j else 0) for j in range(GENUS)):
                continue
            if any(intersection_mod2(b, cand) for b in bs):
                continue
            bs.append(cand)
            break
        else:  # pragma: no cover - impossible for valid input
            raise HomologyError("no symplectic completion")
    return A + tuple(bs)


def coordinates_in_basis(u: Mod2Class, basis: Sequence[Mod2Class]) -> Tuple[int, ...]:
    """Coordinates (x_a1..x_a3, x_b1..x_b3) of ``u`` in a symplectic basis.

    Uses the pairing: the a_i coefficient is u . b_i and the b_i coefficient
    is a_i . u.
    """
    a, b = basis[:GENUS], basis[GENUS:]
    return tuple(intersection_mod2(u, b[i]) for i in range(GENUS)) + tuple(
        intersection_mod2(a[i], u) for i in range(GENUS)
    )


# ---------------------------------------------------------------- JSON

def hclass_to_json(u: HClass) -> List[int]:
    return list(u)


def hclass_from_json(obj: Sequence[int]) -> HClass:
    return hclass(*obj)


__all__ = [
    "A_MASK", "B_MASK", "BASIS_NAMES", "GENUS", "HClass", "HomologyError", "Mod2Class",
    "RANK", "STANDARD_BASIS_MOD2", "ZERO", "a1", "a2", "a3", "add", "b1", "b2", "b3",
    "basis_vector", "check_symplectic_basis", "combo", "complete_symplectic_mod2",
    "coordinates_in_basis", "det", "hclass", "hclass_from_json", "hclass_to_json",
    "intersection", "intersection_mod2", "is_isotropic_direct_summand", "is_primitive",
    "maximal_minor_gcd", "mod2", "mod2_basis", "mod2_from_str", "mod2_independent",
    "mod2_name", "mod2_to_str", "neg", "rank", "scale", "solve_rational", "sub",
]
