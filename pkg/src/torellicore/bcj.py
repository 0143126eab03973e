"""The Birman-Craggs-Johnson homomorphism on symbolic twist generators.

A generator carries only the homological data its formula consumes:

* ``SepTwist``: symplectic pairs spanning one side of the separating curve;
  sigma = sum a-bar b-bar over the pairs.
* ``BPTwist``: the mod-2 class c of the pair and symplectic pairs spanning one
  side inside c-perp; sigma = (c-bar + 1) sum a-bar b-bar.
* ``Involution``: a reference symplectic basis; only the extension
  sigma-hat is defined, with value a1b1(a2 + 1)b2 (bars omitted).

Tags used by the stabilizer tables (``stabrep``) and the chain checks
(``chainlab``) ride along in ``tags``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

from .homlattice import (
    GENUS,
    HClass,
    HomologyError,
    Mod2Class,
    check_symplectic_basis,
    intersection_mod2,
    mod2,
    mod2_from_str,
    mod2_to_str,
)
from .quadbool import (
    BPrimeElement,
    ONE,
    ZERO,
    SpQuadraticForm,
    affine_generator,
)

KINDS = ("SepTwist", "BPTwist", "Involution")


class GeneratorError(ValueError):
    """Malformed generator data."""


Pair = Tuple[Mod2Class, Mod2Class]


def check_side_pairs(pairs: Sequence[Pair]) -> None:
    """Symplectic Gram conditions on a family of pairs."""
    for i, (ai, bi) in enumerate(pairs):
        for j, (aj, bj) in enumerate(pairs):
            if intersection_mod2(ai, aj) or intersection_mod2(bi, bj):
                raise GeneratorError("side pairs violate a.a = 0 or b.b = 0")
            if intersection_mod2(ai, bj) != (1 if i == j else 0):
                raise GeneratorError("side pairs violate a_i.b_j = delta_ij")


@dataclass(frozen=True)
class SymbolicGenerator:
    kind: str
    side_pairs: Tuple[Pair, ...] = ()
    c: Mod2Class | None = None
    c_integral: HClass | None = None
    basis: Tuple[Mod2Class, ...] = ()
    exponent: int = 1
    label: str = ""
    tags: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GeneratorError(f"unknown generator kind {self.kind!r}")
        if self.kind == "Involution":
            if not check_symplectic_basis(self.basis):
                raise GeneratorError("involution needs a symplectic reference basis")
            return
        if not 1 <= len(self.side_pairs) <= GENUS - 1:
            raise GeneratorError("side must have genus 1 or 2")
        check_side_pairs(self.side_pairs)
        if self.kind == "BPTwist":
            c = self.c
            if c is None and self.c_integral is not None:
                c = mod2(self.c_integral)
                object.__setattr__(self, "c", c)
            if not c:
                raise GeneratorError("bounding pair needs a nonzero class")
            if self.c_integral is not None and mod2(self.c_integral) != c:
                raise GeneratorError("integral and mod-2 classes disagree")
            for a, b in self.side_pairs:
                if intersection_mod2(a, c) or intersection_mod2(b, c):
                    raise GeneratorError("side pairs must be orthogonal to c")

    def power(self, e: int) -> "SymbolicGenerator":
        return replace(self, exponent=self.exponent * e)

    def inverse(self) -> "SymbolicGenerator":
        return self.power(-1)

    def with_tags(self, **tags: Any) -> "SymbolicGenerator":
        merged = dict(self.tags)
        merged.update(tags)
        return replace(self, tags=merged)

    # ------------------------------------------------------------ JSON
    def to_json(self) -> dict:
        out: Dict[str, Any] = {"kind": self.kind, "exponent": self.exponent}
        if self.label:
            out["label"] = self.label
        if self.kind == "Involution":
            out["basis"] = [mod2_to_str(v) for v in self.basis]
        else:
            out["side_pairs"] = [[mod2_to_str(a), mod2_to_str(b)] for a, b in self.side_pairs]
        if self.kind == "BPTwist":
            out["c"] = mod2_to_str(self.c)  # type: ignore[arg-type]
            if self.c_integral is not None:
                out["c_integral"] = list(self.c_integral)
        if self.tags:
            out["tags"] = {k: _tag_to_json(v) for k, v in sorted(self.tags.items())}
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "SymbolicGenerator":
        kind = obj["kind"]
        kw: Dict[str, Any] = {"kind": kind, "exponent": int(obj.get("exponent", 1))}
        kw["label"] = obj.get("label", "")
        if kind == "Involution":
            kw["basis"] = tuple(mod2_from_str(s) for s in obj["basis"])
        else:
            kw["side_pairs"] = tuple(
                (mod2_from_str(a), mod2_from_str(b)) for a, b in obj["side_pairs"]
            )
        if kind == "BPTwist":
            kw["c"] = mod2_from_str(obj["c"])
            if "c_integral" in obj:
                kw["c_integral"] = tuple(int(v) for v in obj["c_integral"])
        if "tags" in obj:
            kw["tags"] = {k: _tag_from_json(v) for k, v in obj["tags"].items()}
        return cls(**kw)


def _tag_to_json(v: Any) -> Any:
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, Mapping):
        return {k: _tag_to_json(x) for k, x in sorted(v.items())}
    return v


def _tag_from_json(v: Any) -> Any:
    if isinstance(v, list):
        return tuple(v)
    if isinstance(v, Mapping):
        return {k: _tag_from_json(x) for k, x in v.items()}
    return v


GeneratorWord = Tuple[SymbolicGenerator, ...]


def sep_twist(side_pairs: Sequence[Pair], exponent: int = 1, label: str = "", **tags: Any) -> SymbolicGenerator:
    return SymbolicGenerator("SepTwist", tuple(side_pairs), exponent=exponent, label=label, tags=tags)


def bp_twist(
    c: Mod2Class | HClass,
    side_pairs: Sequence[Pair],
    exponent: int = 1,
    label: str = "",
    **tags: Any,
) -> SymbolicGenerator:
    if isinstance(c, tuple):
        return SymbolicGenerator(
            "BPTwist", tuple(side_pairs), c_integral=c, exponent=exponent, label=label, tags=tags
        )
    return SymbolicGenerator("BPTwist", tuple(side_pairs), c=c, exponent=exponent, label=label, tags=tags)


def involution(basis: Sequence[Mod2Class], exponent: int = 1, label: str = "iota") -> SymbolicGenerator:
    return SymbolicGenerator("Involution", basis=tuple(basis), exponent=exponent, label=label)


def _side_sum(pairs: Iterable[Pair]) -> BPrimeElement:
    out = ZERO
    for a, b in pairs:
        out = out + affine_generator(a) * affine_generator(b)
    return out


def sigma(g: SymbolicGenerator) -> BPrimeElement:
    """sigma of a Torelli generator (an involution is rejected)."""
    if g.kind == "Involution":
        raise GeneratorError("the involution is not in the Torelli group; use sigma_hat")
    if g.exponent % 2 == 0:
        return ZERO
    return _sigma_odd(g.kind, g.side_pairs, g.c)


@functools.lru_cache(maxsize=1 << 14)
def _sigma_odd(kind: str, side_pairs: Tuple[Pair, ...], c: Mod2Class | None) -> BPrimeElement:
    side = _side_sum(side_pairs)
    if kind == "SepTwist":
        return side
    return (affine_generator(c) + ONE) * side  # type: ignore[arg-type]


def sigma_hat(g: SymbolicGenerator) -> BPrimeElement:
    """Extension of sigma that also accepts the involution."""
    if g.kind != "Involution":
        return sigma(g)
    if g.exponent % 2 == 0:
        return ZERO
    a1, a2, _, b1, b2, _ = (affine_generator(v) for v in g.basis)
    return a1 * b1 * (a2 + ONE) * b2


def sigma_word(w: Sequence[SymbolicGenerator]) -> BPrimeElement:
    out = ZERO
    for g in w:
        out = out + sigma(g)
    return out


def sigma_hat_word(w: Sequence[SymbolicGenerator]) -> BPrimeElement:
    out = ZERO
    for g in w:
        out = out + sigma_hat(g)
    return out


def rho(omega: SpQuadraticForm, w: Sequence[SymbolicGenerator] | SymbolicGenerator) -> int:
    if isinstance(w, SymbolicGenerator):
        w = (w,)
    return sigma_word(w).value_at(omega)


def in_C(w: Sequence[SymbolicGenerator]) -> bool:
    return not sigma_word(w)


def lantern_rewrite(
    g: SymbolicGenerator,
    classes: Sequence[Mod2Class | HClass],
    tags: Sequence[Mapping[str, Any]] | None = None,
) -> List[SymbolicGenerator]:
    """Enter a separating twist as three bounding-pair twists.

    The classes c0, c1, c2 must be pairwise orthogonal with c0 + c1 + c2 = 0
    mod 2 and orthogonal to the side pairs; then the three factors
    (c_i-bar + 1) sum to 1 and sigma is preserved.
    """
    if g.kind != "SepTwist":
        raise GeneratorError("lantern rewrite applies to separating twists")
    if len(classes) != 3:
        raise GeneratorError("need three classes")
    ms = [mod2(c) if isinstance(c, tuple) else c for c in classes]
    if ms[0] ^ ms[1] ^ ms[2]:
        raise GeneratorError("classes must sum to zero mod 2")
    for i in range(3):
        for j in range(i + 1, 3):
            if intersection_mod2(ms[i], ms[j]):
                raise GeneratorError("classes must be pairwise orthogonal")
    tags = tags or [{} for _ in classes]
    return [
        bp_twist(c, g.side_pairs, exponent=g.exponent, label=f"{g.label or 'T'}[{i}]", **dict(t))
        for i, (c, t) in enumerate(zip(classes, tags))
    ]


def word_to_json(w: Sequence[SymbolicGenerator]) -> list:
    return [g.to_json() for g in w]


def word_from_json(obj: Sequence[Mapping[str, Any]]) -> GeneratorWord:
    return tuple(SymbolicGenerator.from_json(o) for o in obj)


__all__ = [
    "GeneratorError", "GeneratorWord", "KINDS", "SymbolicGenerator", "bp_twist",
    "check_side_pairs", "in_C", "involution", "lantern_rewrite", "rho", "sep_twist",
    "sigma", "sigma_hat", "sigma_hat_word", "sigma_word", "word_from_json", "word_to_json",
]
