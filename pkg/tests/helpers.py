"""Small brute-force oracles shared by the tests."""

import itertools

from torellicore.homlattice import RANK, STANDARD_BASIS_MOD2, intersection_mod2


def transvect(u, v):
    """Symplectic transvection u -> u + (u.v) v over Z/2."""
    return u ^ v if intersection_mod2(u, v) else u


def random_symplectic_basis(rng, steps=12):
    basis = list(STANDARD_BASIS_MOD2)
    for _ in range(steps):
        v = rng.randrange(1, 1 << RANK)
        basis = [transvect(u, v) for u in basis]
    return tuple(basis)


def form_value_oracle(omega, x):
    """omega(x) from the quadratic law, expanding x bit by bit."""
    total, acc = 0, 0
    for k in range(RANK):
        if (x >> k) & 1:
            e = 1 << k
            total ^= ((omega >> k) & 1) ^ intersection_mod2(acc, e)
            acc ^= e
    return total


def subsets(xs, k):
    return itertools.combinations(xs, k)
