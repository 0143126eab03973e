"""Seeded generators for random symplectic data used by tests and verification suites."""

from __future__ import annotations

import math
import random
from typing import List, Sequence, Tuple

from .homlattice import GENUS, RANK, HClass, basis_vector, combo, intersection, mod2
from .cyclecomplex import is_in_H0prime

STANDARD_A: Tuple[HClass, HClass, HClass] = tuple(basis_vector(n) for n in ("a1", "a2", "a3"))  # type: ignore[assignment]
STANDARD_X: HClass = combo([1, 1, 1], STANDARD_A)


def transvection(v: HClass, u: HClass, k: int = 1) -> HClass:
    """u + k (u . v) v, an element of Sp(6, Z) applied to u."""
    t = k * intersection(u, v)
    return tuple(a + t * b for a, b in zip(u, v))  # type: ignore[return-value]


def random_symplectic_images(
    rng: random.Random, vectors: Sequence[HClass], steps: int = 6
) -> List[HClass]:
    """Apply one random product of transvections to every vector."""
    out = [tuple(v) for v in vectors]
    for _ in range(steps):
        v = tuple(rng.choice((-1, 0, 0, 1)) for _ in range(RANK))
        if not any(v):
            continue
        k = rng.choice((-1, 1))
        out = [transvection(v, u, k) for u in out]  # type: ignore[arg-type]
    return out  # type: ignore[return-value]


def random_coefficients(rng: random.Random, max_n: int) -> Tuple[int, int, int]:
    """Positive n1, n2, n3 with gcd 1 and sum at most max_n."""
    if max_n < GENUS:
        raise ValueError("max_n must be at least 3")
    while True:
        n = [1, 1, 1]
        for _ in range(rng.randint(0, max_n - GENUS)):
            n[rng.randrange(3)] += 1
        if math.gcd(*n) == 1:
            return tuple(n)  # type: ignore[return-value]


def random_vertex_set(
    rng: random.Random, max_n: int = 20, steps: int = 6
) -> Tuple[Tuple[HClass, HClass, HClass], HClass]:
    """A random Lagrangian vertex set A and the class x = n1 a1 + n2 a2 + n3 a3."""
    A = tuple(random_symplectic_images(rng, STANDARD_A, steps))
    n = random_coefficients(rng, max_n)
    order = list(range(3))
    rng.shuffle(order)
    A = tuple(A[i] for i in order)
    x = combo(n, A)
    assert is_in_H0prime(A, x)
    return A, x  # type: ignore[return-value]


def random_vertex_set_fixed_x(
    rng: random.Random, x: HClass = STANDARD_X, max_n: int = 30, tries: int = 10_000
) -> Tuple[HClass, HClass, HClass]:
    """A random vertex set for a fixed x inside the standard Lagrangian.

    Elements are integer combinations of a1, a2, a3 given by a random
    unimodular matrix; rejection keeps those with x a positive combination.
    """
    for _ in range(tries):
        M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(rng.randint(1, 6)):
            i, j = rng.sample(range(3), 2)
            s = rng.choice((-1, 1))
            M[i] = [a + s * b for a, b in zip(M[i], M[j])]
        A = tuple(combo(row, STANDARD_A) for row in M)
        if is_in_H0prime(A, x):
            from .cyclecomplex import n_weight

            if n_weight(A, x).n <= max_n:
                return A  # type: ignore[return-value]
    raise RuntimeError("no vertex set found")


def random_lagrangian_mod2(rng: random.Random) -> Tuple[int, int, int]:
    """Mod-2 reduction of a random Lagrangian vertex set."""
    A, _ = random_vertex_set(rng, max_n=6)
    return tuple(mod2(a) for a in A)  # type: ignore[return-value]


__all__ = [
    "STANDARD_A", "STANDARD_X", "random_coefficients", "random_lagrangian_mod2",
    "random_symplectic_images", "random_vertex_set", "random_vertex_set_fixed_x",
    "transvection",
]
