"""Words in free groups: reduction, products, commutators and collection."""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Sequence, Tuple

Letter = Tuple[str, int]  # (generator name, +1 or -1)
Word = Tuple[Letter, ...]


def letters(spec: Iterable[Tuple[str, int]]) -> Word:
    """Expand (name, exponent) pairs into unit letters and reduce."""
    out: List[Letter] = []
    for name, e in spec:
        s = 1 if e > 0 else -1
        out.extend([(name, s)] * abs(e))
    return reduce(out)


def reduce(w: Iterable[Letter]) -> Word:
    stack: List[Letter] = []
    for name, e in w:
        if stack and stack[-1][0] == name and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((name, e))
    return tuple(stack)


def mul(*ws: Sequence[Letter]) -> Word:
    out: List[Letter] = []
    for w in ws:
        out.extend(w)
    return reduce(out)


def inv(w: Sequence[Letter]) -> Word:
    return tuple((n, -e) for n, e in reversed(w))


def power(w: Sequence[Letter], k: int) -> Word:
    base = tuple(w) if k >= 0 else inv(w)
    return mul(*([base] * abs(k)))


def commutator(g: Sequence[Letter], h: Sequence[Letter]) -> Word:
    """[g, h] = g^-1 h^-1 g h."""
    return mul(inv(g), inv(h), g, h)


def conjugate(h: Sequence[Letter], g: Sequence[Letter]) -> Word:
    """h^g = g^-1 h g."""
    return mul(inv(g), h, g)


def exponent_sums(w: Sequence[Letter]) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for n, e in w:
        out[n] = out.get(n, 0) + e
    return out


def substitute(w: Sequence[Letter], images: Dict[str, Sequence[Letter]]) -> Word:
    out: List[Letter] = []
    for n, e in w:
        img = images.get(n, ((n, 1),))
        out.extend(img if e > 0 else inv(img))
    return reduce(out)


def project(w: Sequence[Letter], keep: Iterable[str]) -> Word:
    keep = set(keep)
    return reduce(l for l in w if l[0] in keep)


def to_str(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(n if e > 0 else f"{n}^-1" for n, e in w)


CommItem = Tuple[Letter, Letter, Word]  # [y, x]^S


def collect(
    w: Sequence[Letter], key: Callable[[str], object]
) -> Tuple[Word, List[CommItem]]:
    """Sort letters by ``key`` using y x = x y [y, x].

    Returns (sorted_word, items) with w = sorted_word * prod_t [y_t, x_t]^{S_t}
    as free-group words, items listed left to right.
    """
    cur: List[Letter] = list(reduce(w))
    items: List[CommItem] = []
    while True:
        for p in range(len(cur) - 1):
            y, x = cur[p], cur[p + 1]
            if key(y[0]) > key(x[0]):
                suffix = tuple(cur[p + 2:])
                items.insert(0, (y, x, suffix))
                cur = list(reduce(cur[:p] + [x, y] + cur[p + 2:]))
                break
        else:
            return tuple(cur), items


__all__ = [
    "CommItem", "Letter", "Word", "collect", "commutator", "conjugate", "exponent_sums",
    "inv", "letters", "mul", "power", "project", "reduce", "substitute", "to_str",
]
