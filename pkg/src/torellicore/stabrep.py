"""Word models of multicurve stabilizers and their homomorphism tables.

Four-component type-1 stabilizer
    Modelled inside F(u1, v1) x F(u2, v2) as ker f, where f sends u_i to (1, 0)
    and v_i to (0, 1).  It is generated by z1 = (u1, u2^-1), z2 = (v1, v2^-1)
    and z3 = ([u1, v1], 1).  Commutators are [g, h] = g^-1 h^-1 g h and
    conjugates are h^g = g^-1 h g.

Five-component stabilizer
    Free on w_k (k in Z), with sigma(w_k) = (a2 + a3 + 1) a1 b1 + k a1 a2 a3
    (bars omitted) and nu_{gamma2}(w_k) = 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from . import freegroup as fg
from .bcj import GeneratorError, SymbolicGenerator, bp_twist, sigma, sigma_word
from .homlattice import HClass, HomologyError, Mod2Class, STANDARD_BASIS_MOD2
from .quadbool import FormFamily, four_forms

Rho = Tuple[int, int, int, int]

UV = ("u1", "v1", "u2", "v2")
Z = ("z1", "z2", "z3")
_A1, _A2, _A3, _B1, _B2, _B3 = STANDARD_BASIS_MOD2


class StabilizerError(ValueError):
    """Word outside the required subgroup or malformed table input."""


def add_rho(*rs: Rho) -> Rho:
    out = [0, 0, 0, 0]
    for r in rs:
        for i in range(4):
            out[i] ^= r[i] & 1
    return tuple(out)  # type: ignore[return-value]


def scale_rho(e: int, r: Rho) -> Rho:
    return tuple((e * v) & 1 for v in r)  # type: ignore[return-value]


# ---------------------------------------------------------------- type-1 generators

def type_one_generators() -> Dict[str, SymbolicGenerator]:
    """Twist data of z1, z2 and z1 z3 in the standard type-1 configuration."""
    return {
        "z1": bp_twist(_A2 | _A3, [(_A1, _B1)], label="z1"),
        "z2": bp_twist(_A1 | _A3, [(_A2, _B2)], label="z2"),
        "z1z3": bp_twist(_A2 | _A3, [(_A1, _B1 ^ _A3)], label="z1z3"),
    }


@functools.lru_cache(maxsize=None)
def type_one_family() -> FormFamily:
    return four_forms(STANDARD_BASIS_MOD2[:3])


def type_one_rho_table(family: FormFamily | None = None) -> Mapping[str, Rho]:
    """rho-vectors of z1, z2, z3, obtained from sigma of the twist data."""
    if family is None:
        return _default_rho_table()
    return _rho_table(family)


@functools.lru_cache(maxsize=None)
def _default_rho_table() -> Mapping[str, Rho]:
    return _rho_table(type_one_family())


def _rho_table(family: FormFamily) -> Mapping[str, Rho]:
    g = type_one_generators()
    s1, s2, s13 = sigma(g["z1"]), sigma(g["z2"]), sigma(g["z1z3"])
    return MappingProxyType({
        "z1": family.rho_vector(s1),
        "z2": family.rho_vector(s2),
        "z3": family.rho_vector(s1 + s13),
    })


XI_TABLE = {"z1": (1, 0), "z2": (0, 1), "z3": (0, 0)}

Z_TO_UV: Dict[str, fg.Word] = {
    "z1": (("u1", 1), ("u2", -1)),
    "z2": (("v1", 1), ("v2", -1)),
    "z3": fg.commutator((("u1", 1),), (("v1", 1),)),
}


@dataclass(frozen=True)
class TypeOneWord:
    """A word over {u1, v1, u2, v2} or over {z1, z2, z3}."""

    letters: fg.Word

    @classmethod
    def parse(cls, spec: Iterable[Tuple[str, int]]) -> "TypeOneWord":
        w = fg.letters(spec)
        names = {n for n, _ in w}
        if names - set(UV) and names - set(Z):
            raise StabilizerError("mixed or unknown alphabet")
        return cls(w)

    @property
    def alphabet(self) -> str:
        names = {n for n, _ in self.letters}
        if not names:
            return "z"
        if names <= set(Z):
            return "z"
        if names <= set(UV):
            return "uv"
        raise StabilizerError("mixed or unknown alphabet")

    def __mul__(self, other: "TypeOneWord") -> "TypeOneWord":
        return TypeOneWord(fg.mul(self.letters, other.letters))

    def inverse(self) -> "TypeOneWord":
        return TypeOneWord(fg.inv(self.letters))

    def to_json(self) -> list:
        return [[n, e] for n, e in self.letters]

    @classmethod
    def from_json(cls, obj: Sequence[Sequence[Any]]) -> "TypeOneWord":
        return cls.parse((str(n), int(e)) for n, e in obj)

    def __str__(self) -> str:
        return fg.to_str(self.letters)


def zw(*spec: Tuple[str, int]) -> TypeOneWord:
    return TypeOneWord.parse(spec)


def uv_image(w: TypeOneWord) -> Tuple[fg.Word, fg.Word]:
    """The pair of free-group words (first factor, second factor)."""
    letters = w.letters
    if w.alphabet == "z":
        letters = fg.substitute(letters, Z_TO_UV)
    return fg.project(letters, ("u1", "v1")), fg.project(letters, ("u2", "v2"))


def f_image(w: TypeOneWord) -> Tuple[int, int]:
    if w.alphabet == "z":
        return (0, 0)
    s = fg.exponent_sums(w.letters)
    return (s.get("u1", 0) + s.get("u2", 0), s.get("v1", 0) + s.get("v2", 0))


def in_IM(w: TypeOneWord) -> bool:
    return f_image(w) == (0, 0)


def same_element(w1: TypeOneWord, w2: TypeOneWord) -> bool:
    return uv_image(w1) == uv_image(w2)


def xi(w: TypeOneWord) -> Tuple[int, int]:
    """(u1-count, v1-count) of the first-factor projection."""
    first, _ = uv_image(w)
    s = fg.exponent_sums(first)
    return (s.get("u1", 0), s.get("v1", 0))


# ---------------------------------------------------------------- rewriting ker f into z-words

def _unit_commutator_as_conjugate(y: fg.Letter, x: fg.Letter, u: str, v: str) -> Tuple[int, fg.Word]:
    """Write [y, x] (y a v-letter, x a u-letter) as ([u, v]^s)^g; returns (s, g)."""
    (yn, ye), (xn, xe) = y, x
    assert yn == v and xn == u
    U, V = ((u, 1),), ((v, 1),)
    if (ye, xe) == (1, 1):
        return -1, ()
    if (ye, xe) == (-1, 1):
        return 1, fg.inv(V)
    if (ye, xe) == (1, -1):
        return 1, fg.inv(U)
    return -1, fg.mul(fg.inv(U), fg.inv(V))


def _commutator_conjugates(p: fg.Word, u: str, v: str) -> List[Tuple[int, fg.Word]]:
    """Write p in [F, F] (F free on u, v) as prod ([u, v]^s)^g, left to right."""
    order = {u: 0, v: 1}
    rest, items = fg.collect(p, order.__getitem__)
    if rest:
        raise StabilizerError("word is not in the commutator subgroup")
    out = []
    for y, x, suffix in items:
        s, g = _unit_commutator_as_conjugate(y, x, u, v)
        out.append((s, fg.mul(g, suffix)))
    return out


def uv_to_z(w: TypeOneWord) -> TypeOneWord:
    """Rewrite an element of ker f given over {u, v} as a word in z1, z2, z3."""
    if w.alphabet == "z":
        return w
    if not in_IM(w):
        raise StabilizerError("word is not in ker f")
    first, second = uv_image(w)
    s = fg.exponent_sums(first)
    al, be = s.get("u1", 0), s.get("v1", 0)
    head = fg.letters([("z1", al), ("z2", be)])
    p1 = fg.mul(fg.letters([("v1", -be), ("u1", -al)]), first)
    q1 = fg.mul(fg.letters([("v2", be), ("u2", al)]), second)
    lift1 = {"u1": (("z1", 1),), "v1": (("z2", 1),)}
    lift2 = {"u2": (("z1", -1),), "v2": (("z2", -1),)}
    z4 = fg.letters([("z1", 1), ("z2", 1), ("z3", -1), ("z1", -1), ("z2", -1)])
    parts: List[fg.Word] = [head]
    for sgn, g in _commutator_conjugates(p1, "u1", "v1"):
        parts.append(fg.conjugate(fg.power((("z3", 1),), sgn), fg.substitute(g, lift1)))
    for sgn, g in _commutator_conjugates(q1, "u2", "v2"):
        parts.append(fg.conjugate(fg.power(z4, sgn), fg.substitute(g, lift2)))
    out = TypeOneWord(fg.mul(*parts))
    if not same_element(out, w):  # pragma: no cover - self-check
        raise AssertionError("rewriting self-check failed")
    return out


def rho_IM(w: TypeOneWord, i: int | None = None, table: Mapping[str, Rho] | None = None):
    """rho-vector (or its i-th entry) of an element of the type-1 stabilizer."""
    table = table or type_one_rho_table()
    zword = uv_to_z(w)
    r: Rho = (0, 0, 0, 0)
    for n, e in zword.letters:
        r = add_rho(r, scale_rho(e, table[n]))
    return r if i is None else r[i]


def liftrho_check(w: TypeOneWord, table: Mapping[str, Rho] | None = None) -> bool:
    """rho_0 + rho_1 = xi_2 and rho_0 + rho_2 = xi_1 (mod 2)."""
    r = rho_IM(w, table=table)
    x1, x2 = xi(w)
    return (r[0] ^ r[1]) == (x2 & 1) and (r[0] ^ r[2]) == (x1 & 1)


# ---------------------------------------------------------------- psi on commutator/square decompositions

Wordish = Union[TypeOneWord, "FiveCurveWord"]


@dataclass(frozen=True)
class Comm:
    h1: Any
    h2: Any
    conj: Any = None


@dataclass(frozen=True)
class Sq:
    h: Any
    conj: Any = None


@dataclass(frozen=True)
class CommSqDecomposition:
    items: Tuple[Union[Comm, Sq], ...]

    def __add__(self, other: "CommSqDecomposition") -> "CommSqDecomposition":
        return CommSqDecomposition(self.items + other.items)

    def conjugated(self, g: Any) -> "CommSqDecomposition":
        def c(old):
            return g if old is None else old * g

        return CommSqDecomposition(
            tuple(Comm(it.h1, it.h2, c(it.conj)) if isinstance(it, Comm) else Sq(it.h, c(it.conj)) for it in self.items)
        )

    def to_json(self) -> list:
        out = []
        for it in self.items:
            if isinstance(it, Comm):
                d = {"comm": [it.h1.to_json(), it.h2.to_json()]}
            else:
                d = {"sq": it.h.to_json()}
            if it.conj is not None:
                d["conj"] = it.conj.to_json()
            out.append(d)
        return out

    @classmethod
    def from_json(cls, obj: Sequence[Mapping[str, Any]], word_type: type = TypeOneWord) -> "CommSqDecomposition":
        items: List[Union[Comm, Sq]] = []
        for d in obj:
            conj = word_type.from_json(d["conj"]) if "conj" in d else None
            if "comm" in d:
                a, b = d["comm"]
                items.append(Comm(word_type.from_json(a), word_type.from_json(b), conj))
            else:
                items.append(Sq(word_type.from_json(d["sq"]), conj))
        return cls(tuple(items))


def comm_value(r1: Rho, r2: Rho) -> int:
    """sum over i != j of r1_i r2_j."""
    return sum(r1[i] * r2[j] for i in range(4) for j in range(4) if i != j) & 1


def sq_value(r: Rho) -> int:
    """sum over i < j of r_i r_j."""
    return sum(r[i] * r[j] for i in range(4) for j in range(i + 1, 4)) & 1


def _rho_of(h: Any, table: Mapping[str, Rho] | None) -> Rho:
    if isinstance(h, TypeOneWord):
        if not in_IM(h):
            raise StabilizerError("item word is not in ker f")
        return rho_IM(h, table=table)
    if isinstance(h, FiveCurveWord):
        return h.rho()
    raise StabilizerError(f"unsupported item word {h!r}")


def psi_M(d: CommSqDecomposition, table: Mapping[str, Rho] | None = None) -> int:
    """psi on a product of commutators and squares (conjugation is ignored)."""
    total = 0
    for it in d.items:
        if isinstance(it, Comm):
            total ^= comm_value(_rho_of(it.h1, table), _rho_of(it.h2, table))
        else:
            total ^= sq_value(_rho_of(it.h, table))
    return total


def decomposition_product(d: CommSqDecomposition) -> fg.Word:
    """The free-group word of the product of all items."""
    def free(h: Any) -> fg.Word:
        return h.as_free_word() if isinstance(h, FiveCurveWord) else h.letters

    parts = []
    for it in d.items:
        if isinstance(it, Comm):
            w = fg.commutator(free(it.h1), free(it.h2))
        else:
            w = fg.power(free(it.h), 2)
        if it.conj is not None:
            w = fg.conjugate(w, free(it.conj))
        parts.append(w)
    return fg.mul(*parts)


def _canonical_items(
    word: fg.Word, order: Mapping[str, int], make: Any, rho_of_letter: Any
) -> CommSqDecomposition:
    rest, items = fg.collect(word, lambda n: order[n])
    total: Rho = (0, 0, 0, 0)
    for n, e in rest:
        total = add_rho(total, scale_rho(e, rho_of_letter(n)))
    if any(total):
        raise StabilizerError("word is not in the kernel of rho")
    head: List[Union[Comm, Sq]] = []
    exps = fg.exponent_sums(rest)
    runs: List[Tuple[str, int]] = [(n, exps[n]) for n in sorted(exps, key=lambda n: order[n]) if exps[n]]
    if any(e % 2 for _, e in runs):
        raise StabilizerError("remainder is not a product of squares in the free group")
    for n, e in runs:
        head.append(Sq(make(fg.letters([(n, e // 2)]))))
    body = [
        Comm(make(((y),)), make(((x),)), make(s) if s else None) for y, x, s in items
    ]
    return CommSqDecomposition(tuple(head + body))


def canonical_decomposition(w: TypeOneWord) -> CommSqDecomposition:
    """Decompose a z-word with vanishing rho into commutators and squares."""
    zword = uv_to_z(w)
    table = type_one_rho_table()
    return _canonical_items(zword.letters, {"z1": 0, "z2": 1, "z3": 2}, TypeOneWord, table.__getitem__)


def psi_of_word(w: TypeOneWord) -> int:
    return psi_M(canonical_decomposition(w))


def iota_z3_decomposition() -> CommSqDecomposition:
    """[iota, z3] as Comm(z1^-1 z2^-1, z3^-1) + Sq(z3) + Comm(z2^-1, z1^-1)^z3."""
    return CommSqDecomposition((
        Comm(zw(("z1", -1), ("z2", -1)), zw(("z3", -1))),
        Sq(zw(("z3", 1))),
        Comm(zw(("z2", -1)), zw(("z1", -1)), zw(("z3", 1))),
    ))


def beta(r1: Rho, r2: Rho) -> int:
    return sum(r1[i] * r2[j] for i in range(4) for j in range(i + 1, 4)) & 1


def psi_cochain(word: fg.Word, rho_of_letter: Any) -> int:
    """Quadratic cochain t with t(gh) = t(g) + t(h) + beta(rho g, rho h) on a free group.

    Normalized by t(generator) = 0; then t(generator^-1) = beta(r, r).  On
    words with vanishing rho it restricts to a homomorphism obeying the two
    commutator/square formulas.
    """
    total = 0
    acc: Rho = (0, 0, 0, 0)
    for n, e in word:
        r = rho_of_letter(n)
        c = 0 if e > 0 else beta(r, r)
        total ^= c ^ beta(acc, r)
        acc = add_rho(acc, r)
    return total


# ---------------------------------------------------------------- five-component stabilizer

def w_generator(k: int, exponent: int = 1) -> SymbolicGenerator:
    """w_k as a bounding-pair twist: class a2 + a3, side (a1, b1 + k a3)."""
    side_b = _B1 ^ (_A3 if k % 2 else 0)
    return bp_twist(
        _A2 | _A3,
        [(_A1, side_b)],
        exponent=exponent,
        label=f"w{k}",
        pair=(f"gamma1_{k}", "gamma2"),
        splitting={"gamma2": f"W{k}"},
    )


@dataclass(frozen=True)
class FiveCurveWord:
    """A word in the free generators w_k; letters are (k, +-1)."""

    letters: Tuple[Tuple[int, int], ...]

    @classmethod
    def parse(cls, spec: Iterable[Tuple[int, int]]) -> "FiveCurveWord":
        w = fg.letters((f"w{k}", e) for k, e in spec)
        return cls(tuple((int(n[1:]), e) for n, e in w))

    def as_free_word(self) -> fg.Word:
        return tuple((f"w{k}", e) for k, e in self.letters)

    @classmethod
    def from_free_word(cls, w: fg.Word) -> "FiveCurveWord":
        return cls(tuple((int(n[1:]), e) for n, e in fg.reduce(w)))

    def __mul__(self, other: "FiveCurveWord") -> "FiveCurveWord":
        return FiveCurveWord.from_free_word(fg.mul(self.as_free_word(), other.as_free_word()))

    def inverse(self) -> "FiveCurveWord":
        return FiveCurveWord.from_free_word(fg.inv(self.as_free_word()))

    def generators(self) -> Tuple[SymbolicGenerator, ...]:
        return tuple(w_generator(k, e) for k, e in self.letters)

    def rho(self, family: FormFamily | None = None) -> Rho:
        if family is None:
            return add_rho(*(scale_rho(e, five_curve_rho(k)) for k, e in self.letters))
        return family.rho_vector(sigma_word(self.generators()))

    def nu(self) -> int:
        return sum(e for _, e in self.letters)

    def to_json(self) -> list:
        return [[k, e] for k, e in self.letters]

    @classmethod
    def from_json(cls, obj: Sequence[Sequence[int]]) -> "FiveCurveWord":
        return cls.parse((int(k), int(e)) for k, e in obj)


def fw(*spec: Tuple[int, int]) -> FiveCurveWord:
    return FiveCurveWord.parse(spec)


def in_CK(w: FiveCurveWord) -> bool:
    return not sigma_word(w.generators())


def psi_on_CK(w: FiveCurveWord) -> int:
    """nu_{gamma2}(w) / 2 mod 2 for w in the kernel of sigma."""
    if not in_CK(w):
        raise StabilizerError("word is not in the kernel of sigma")
    nu = w.nu()
    if nu % 2:
        raise AssertionError("internal inconsistency: odd nu on the kernel of sigma")
    return (nu // 2) & 1


def nu_Wk_table(k: int, m: int) -> int:
    return 1 if k == m else 0


def nu_Wk(w: FiveCurveWord, k: int) -> int:
    return sum(e * nu_Wk_table(k, m) for m, e in w.letters)


@functools.lru_cache(maxsize=None)
def five_curve_rho(k: int) -> Rho:
    return type_one_family().rho_vector(sigma(w_generator(k)))


def canonical_decomposition_ck(w: FiveCurveWord) -> CommSqDecomposition:
    """Collect a word in the w_k into commutators and squares.

    Requires every exponent sum to be even: a word such as w0 w2 lies in the
    kernel of sigma but not in the subgroup generated by squares of the free
    group, so no free-group decomposition exists.
    """
    order = {f"w{k}": i for i, k in enumerate(sorted({k for k, _ in w.letters}))}
    return _canonical_items(
        w.as_free_word(),
        order,
        FiveCurveWord.from_free_word,
        lambda n: five_curve_rho(int(n[1:])),
    )


# ---------------------------------------------------------------- nu, nu_W and mu tables

@dataclass(frozen=True)
class SplittingW:
    """An orthogonal splitting of c-perp / c into two rank-2 summands."""

    label: str
    summands: Tuple[Tuple[HClass, HClass], Tuple[HClass, HClass]]
    k: int | None = None


def splitting_Wk(k: int) -> SplittingW:
    """<e2, f2 - k e3> + <e3, f3 - k e2> in the basis (e, f) = (a, b)."""
    e2 = (0, 1, 0, 0, 0, 0)
    e3 = (0, 0, 1, 0, 0, 0)
    f2k = (0, 0, -k, 0, 1, 0)
    f3k = (0, -k, 0, 0, 0, 1)
    return SplittingW(f"W{k}", ((e2, f2k), (e3, f3k)), k)


def _resolve(g: SymbolicGenerator, gamma: Union[str, HClass]) -> str:
    if isinstance(gamma, str):
        return gamma
    classes = g.tags.get("curve_classes")
    if not classes:
        raise StabilizerError("missing tag: curve_classes")
    names = [n for n, c in classes.items() if tuple(c) == tuple(gamma)]
    if len(names) != 1:
        raise StabilizerError("class does not identify a unique curve")
    return names[0]


def nu_on_generator(g: SymbolicGenerator, gamma: Union[str, HClass]) -> int:
    name = _resolve(g, gamma)
    e = g.exponent
    if g.kind == "SepTwist":
        if name in g.tags.get("genus2_side", ()):
            return e
        if name in g.tags.get("genus1_side", ()):
            return 0
        raise StabilizerError(f"missing tag: side of {name}")
    if g.kind == "BPTwist":
        pair = g.tags.get("pair")
        if pair and name == pair[0]:
            return -e
        if pair and name == pair[1]:
            return e
        if name in g.tags.get("disjoint", ()):
            return 0
        raise StabilizerError(f"missing tag: relation of {name} to the pair")
    raise GeneratorError("nu is defined on Torelli generators only")


def nu_W(g: SymbolicGenerator, gamma: Union[str, HClass], W: SplittingW) -> int:
    name = _resolve(g, gamma)
    base = nu_on_generator(g, name)
    if base == 0:
        return 0
    split = g.tags.get("splitting")
    if split is None:
        raise StabilizerError("missing tag: splitting")
    return base if split.get(name) == W.label else 0


def mu_on_generator(g: SymbolicGenerator, pair: Tuple[Union[str, HClass], Union[str, HClass]]) -> int:
    s = nu_on_generator(g, pair[0]) + nu_on_generator(g, pair[1])
    if s % 2:
        raise StabilizerError("nu values of the pair have odd sum")
    return s // 2


def nu_word(w: Sequence[SymbolicGenerator], gamma: Union[str, HClass]) -> int:
    return sum(nu_on_generator(g, gamma) for g in w)


def mu_word(w: Sequence[SymbolicGenerator], pair) -> int:
    return sum(mu_on_generator(g, pair) for g in w)


# ---------------------------------------------------------------- type-2 generators

def type_two_generator(i: int, m1: int, m2: int, exponent: int = 1) -> SymbolicGenerator:
    """T_{alpha_i', alpha_i}: class a1 + a2, a1 or a2; side (a3, b3 + m1 a1 + m2 a2)."""
    cls = (_A1 | _A2, _A1, _A2)[i]
    side_b = _B3 ^ (_A1 if m1 % 2 else 0) ^ (_A2 if m2 % 2 else 0)
    others = {f"alpha{j}" for j in range(3) if j != i} | {f"alpha{j}'" for j in range(3) if j != i}
    return bp_twist(
        cls,
        [(_A3, side_b)],
        exponent=exponent,
        label=f"T{i}[{m1},{m2}]",
        pair=(f"alpha{i}'", f"alpha{i}"),
        disjoint=frozenset(others | {"alpha3"}),
    )


__all__ = [
    "Comm", "CommSqDecomposition", "FiveCurveWord", "Rho", "SplittingW", "Sq",
    "StabilizerError", "TypeOneWord", "XI_TABLE", "Z_TO_UV", "add_rho", "beta",
    "canonical_decomposition", "canonical_decomposition_ck", "comm_value",
    "decomposition_product", "f_image", "five_curve_rho", "fw", "in_CK", "in_IM", "iota_z3_decomposition",
    "liftrho_check", "mu_on_generator", "mu_word", "nu_W", "nu_Wk", "nu_Wk_table",
    "nu_on_generator", "nu_word", "psi_M", "psi_cochain", "psi_of_word", "psi_on_CK",
    "rho_IM", "same_element", "splitting_Wk", "sq_value", "type_one_family",
    "type_one_generators", "type_one_rho_table", "type_two_generator", "uv_image",
    "uv_to_z", "w_generator", "xi", "zw",
]
