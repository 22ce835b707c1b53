"""stokeslab: exact algebra and certified numerics for an equivariant
quantum differential equation on projective space.

Subpackage map:

- ``laurent``   exact Laurent polynomials over Q (the coefficient ring)
- ``ktheory``   the equivariant K-theory ring of P^{n-1} and its pairing
- ``braid``     exceptional bases and the braid-group action on them
- ``specfun``   arbitrary-precision special functions with argument tracking
- ``geometry``  quantum multiplication, R-matrices, difference connections
- ``solver``    q-hypergeometric solution bases (series and contour routes)
- ``stokes``    Stokes rays, sectors, exponential asymptotics, n-gon paths
- ``verify``    check-record framework tying numerics to algebraic predictions
- ``cli``       command-line entry point (``stokeslab``)
"""

from __future__ import annotations

__version__ = "0.1.0"
