"""GF(2) span and rank kernel on int bitsets.

The compiled backend is used when it was built; otherwise the pure-Python
backend is selected at import.  Set ``TORELLICORE_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os
from typing import Iterable, List

from . import _gf2_py

BACKEND = "python"
_impl = _gf2_py
if os.environ.get("TORELLICORE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _gf2_ext as _compiled  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def echelon(rows: Iterable[int]) -> List[int]:
    """Reduced echelon basis (pivot = lowest set bit), sorted by pivot."""
    return _impl.echelon(rows)


def rank(rows: Iterable[int]) -> int:
    """Rank over GF(2)."""
    return len(_impl.echelon(rows))


def popcount(v: int) -> int:
    return v.bit_count()


def parity(v: int) -> int:
    return popcount(v) & 1


class Span:
    """A GF(2) subspace given by a reduced echelon basis."""

    __slots__ = ("basis", "_by_pivot")

    def __init__(self, rows: Iterable[int] = ()) -> None:
        self.basis = echelon(rows)
        self._by_pivot = {b & -b: b for b in self.basis}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: int) -> int:
        """Residue of ``v`` modulo the span (zero iff ``v`` is in the span)."""
        for piv, b in self._by_pivot.items():
            if v & piv:
                v ^= b
        return v

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0


__all__ = ["BACKEND", "Span", "echelon", "parity", "popcount", "rank"]
