"""Sp-quadratic functions on H_1(S; Z/2) and Boolean function algebras.

A quadratic function is stored as the 6-bit int of its values on the fixed
basis; the quadratic law fixes all other values.  The algebra B' is modelled
as functions on the 36 forms of Arf invariant 0, so an element is a 36-bit
table; its filtration degree is found by span membership.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .gf2 import Span, parity
from .homlattice import (
    A_MASK,
    GENUS,
    RANK,
    HomologyError,
    Mod2Class,
    STANDARD_BASIS_MOD2,
    complete_symplectic_mod2,
    intersection_mod2,
    mod2_from_str,
    mod2_to_str,
)

SpQuadraticForm = int


def evaluate(omega: SpQuadraticForm, x: Mod2Class) -> int:
    """omega(x) = sum_k x_k omega(e_k) + sum_i x_{a_i} x_{b_i} (mod 2)."""
    return parity(x & omega) ^ parity(x & (x >> GENUS) & A_MASK)


def arf_in_basis(omega: SpQuadraticForm, basis: Sequence[Mod2Class]) -> int:
    return sum(evaluate(omega, basis[i]) * evaluate(omega, basis[i + GENUS]) for i in range(GENUS)) & 1


def arf(omega: SpQuadraticForm) -> int:
    """Arf invariant, computed in the fixed basis."""
    return arf_in_basis(omega, STANDARD_BASIS_MOD2)


ALL_FORMS: Tuple[SpQuadraticForm, ...] = tuple(range(1 << RANK))
OMEGA0: Tuple[SpQuadraticForm, ...] = tuple(
    sorted((w for w in ALL_FORMS if arf(w) == 0), key=mod2_to_str)
)
OMEGA0_INDEX: Dict[SpQuadraticForm, int] = {w: i for i, w in enumerate(OMEGA0)}
NPOINTS = len(OMEGA0)
FULL_MASK = (1 << NPOINTS) - 1


def form_to_str(omega: SpQuadraticForm) -> str:
    return mod2_to_str(omega)


def form_from_str(s: str) -> SpQuadraticForm:
    return mod2_from_str(s)


# ---------------------------------------------------------------- B' elements

class BPrimeElement:
    """A Boolean function on the Arf-zero forms, stored as a 36-bit table."""

    __slots__ = ("table", "_degree")

    def __init__(self, table: int) -> None:
        self.table = table & FULL_MASK
        self._degree: int | None = None

    def __add__(self, other: "BPrimeElement | int") -> "BPrimeElement":
        if isinstance(other, int):
            other = constant(other)
        return BPrimeElement(self.table ^ other.table)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other: "BPrimeElement | int") -> "BPrimeElement":
        if isinstance(other, int):
            other = constant(other)
        return BPrimeElement(self.table & other.table)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = constant(other)
        return isinstance(other, BPrimeElement) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __bool__(self) -> bool:
        return self.table != 0

    def __repr__(self) -> str:
        return f"BPrimeElement({self.to_json()})"

    def value_at(self, omega: SpQuadraticForm) -> int:
        try:
            return (self.table >> OMEGA0_INDEX[omega]) & 1
        except KeyError:
            raise HomologyError("form has Arf invariant 1") from None

    @property
    def degree(self) -> int:
        if self._degree is None:
            self._degree = degree(self)
        return self._degree

    def to_json(self) -> str:
        return f"{self.table:09x}"

    @classmethod
    def from_json(cls, s: str) -> "BPrimeElement":
        return cls(int(s, 16))


def constant(c: int) -> BPrimeElement:
    return BPrimeElement(FULL_MASK if c & 1 else 0)


ZERO = constant(0)
ONE = constant(1)


@functools.lru_cache(maxsize=None)
def affine_generator(x: Mod2Class) -> BPrimeElement:
    """x-bar: the function omega -> omega(x)."""
    return BPrimeElement(sum(evaluate(w, x) << i for i, w in enumerate(OMEGA0)))


def gen(name: str) -> BPrimeElement:
    """Affine generator for a basis name such as 'a1' or 'b3'."""
    from .homlattice import mod2_basis

    return affine_generator(mod2_basis(name))


def product(elems: Iterable[BPrimeElement]) -> BPrimeElement:
    out = ONE
    for e in elems:
        out = out * e
    return out


# ---------------------------------------------------------------- filtration

def _monomial_tables(points: Sequence[SpQuadraticForm], max_degree: int) -> List[int]:
    gens = [sum(evaluate(w, 1 << k) << i for i, w in enumerate(points)) for k in range(RANK)]
    full = (1 << len(points)) - 1
    out = []
    for d in range(max_degree + 1):
        for combo in itertools.combinations(range(RANK), d):
            t = full
            for k in combo:
                t &= gens[k]
            out.append(t)
    return out


@functools.lru_cache(maxsize=None)
def filtration_span(d: int) -> Span:
    """Span of B'_d: products of at most d affine generators (cached)."""
    return Span(_monomial_tables(OMEGA0, min(d, RANK)))


def in_Bk(e: BPrimeElement, k: int) -> bool:
    return e.table in filtration_span(k)


def degree(e: BPrimeElement) -> int:
    for d in range(RANK + 1):
        if in_Bk(e, d):
            return d
    raise AssertionError("every function lies in B'_6")  # pragma: no cover


def dim_Bprime(d: int | None = None) -> int:
    return filtration_span(RANK if d is None else d).dim


# ---------------------------------------------------------------- full algebra B (64 points)

@functools.lru_cache(maxsize=None)
def full_filtration_span(d: int) -> Span:
    """Span of B_d inside functions on all 64 forms."""
    return Span(_monomial_tables(ALL_FORMS, min(d, RANK)))


def full_table(fn) -> int:
    return sum((fn(w) & 1) << w for w in ALL_FORMS)


def restrict_to_omega0(table64: int) -> BPrimeElement:
    return BPrimeElement(sum(((table64 >> w) & 1) << i for i, w in enumerate(OMEGA0)))


# ---------------------------------------------------------------- four forms of a set A

@dataclass(frozen=True)
class FormFamily:
    """The four Arf-zero forms equal to 1 on A, numbered through a completion basis."""

    A: Tuple[Mod2Class, ...]
    basis: Tuple[Mod2Class, ...]
    forms: Tuple[SpQuadraticForm, SpQuadraticForm, SpQuadraticForm, SpQuadraticForm]

    def rho_vector(self, e: BPrimeElement) -> Tuple[int, int, int, int]:
        return tuple(e.value_at(w) for w in self.forms)  # type: ignore[return-value]

    def to_json(self) -> dict:
        return {
            "forms": [form_to_str(w) for w in self.forms],
            "basis": [mod2_to_str(v) for v in self.basis],
        }


def numbering_value(i: int, j: int) -> int:
    """Prescribed omega_i(b_j) for i in 0..3, j in 1..3."""
    return 0 if i == 0 or i == j else 1


def forms_equal_one_on(A: Sequence[Mod2Class]) -> List[SpQuadraticForm]:
    """Exhaustive filter: Arf-zero forms with omega(a) = 1 for all a in A."""
    return [w for w in ALL_FORMS if arf(w) == 0 and all(evaluate(w, a) == 1 for a in A)]


def four_forms(A: Sequence[Mod2Class]) -> FormFamily:
    basis = complete_symplectic_mod2(A)
    candidates = forms_equal_one_on(basis[:GENUS])
    forms = []
    for i in range(4):
        match = [
            w
            for w in candidates
            if all(evaluate(w, basis[GENUS + j - 1]) == numbering_value(i, j) for j in (1, 2, 3))
        ]
        if len(match) != 1:  # pragma: no cover - excluded by the counting argument
            raise HomologyError("form numbering is not unique")
        forms.append(match[0])
    if sorted(forms) != sorted(candidates):  # pragma: no cover
        raise HomologyError("unexpected number of forms")
    return FormFamily(tuple(basis[:GENUS]), tuple(basis), tuple(forms))  # type: ignore[arg-type]


def check_quadratic_law(omega: SpQuadraticForm) -> bool:
    return all(
        evaluate(omega, x ^ y) == evaluate(omega, x) ^ evaluate(omega, y) ^ intersection_mod2(x, y)
        for x in range(1 << RANK)
        for y in range(1 << RANK)
    )


__all__ = [
    "ALL_FORMS", "BPrimeElement", "FULL_MASK", "FormFamily", "NPOINTS", "OMEGA0",
    "OMEGA0_INDEX", "ONE", "SpQuadraticForm", "ZERO", "affine_generator", "arf",
    "arf_in_basis", "check_quadratic_law", "constant", "degree", "dim_Bprime", "evaluate",
    "filtration_span", "form_from_str", "form_to_str", "forms_equal_one_on", "four_forms",
    "full_filtration_span", "full_table", "gen", "in_Bk", "numbering_value", "product",
    "restrict_to_omega0",
]
