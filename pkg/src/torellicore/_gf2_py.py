"""Pure-Python GF(2) elimination on int bitsets (fallback backend)."""

from __future__ import annotations

from typing import Iterable, List


def echelon(rows: Iterable[int]) -> List[int]:
    """Return the reduced row echelon basis of the span of ``rows``.

    Bit ``j`` of an int is column ``j``.  The pivot of a basis vector is its
    lowest set bit; no other basis vector has that bit set.  The result is
    sorted by pivot, so it is a canonical form of the row space.
    """
    basis: dict[int, int] = {}
    for row in rows:
        v = row
        for piv, b in basis.items():
            if v & piv:
                v ^= b
        if not v:
            continue
        low = v & -v
        for piv, b in basis.items():
            if b & low:
                basis[piv] = b ^ v
        basis[low] = v
    return [basis[k] for k in sorted(basis)]


def rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a family of bitset rows."""
    return len(echelon(rows))


__all__ = ["echelon", "rank"]
