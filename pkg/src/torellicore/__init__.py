"""Exact finite models around the genus-3 Torelli group.

Submodules
----------
gf2          GF(2) span and rank kernel (compiled with a pure-Python fallback)
homlattice   integer homology of the genus-3 surface and its symplectic form
quadbool     quadratic forms on H1(S; Z/2) and Boolean-function invariants
bcj          the Birman-Craggs-Johnson homomorphism and its target B'_3
cyclecomplex cells of the curve-multiset complex and their taxonomy
stabrep      stabilizer representatives and the homomorphisms on them
chainlab     labelled E1 chains, the differential d1 and its identities
descent      exact weight functions and the descent verifier
sampling     seeded random symplectic data
cli          command-line entry point
"""

from . import gf2

__version__ = "0.1.0"

__all__ = ["__version__", "gf2"]
