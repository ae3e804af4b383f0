"""heegnercert: Heegner-point and Galois-cohomology certification toolkit.

Library layout:

- ``arith``        integer / p-adic / rational-reconstruction utilities
- ``bigfloat``     arbitrary-precision real and complex arithmetic
- ``finitefield``  F_{p^f} as explicit coefficient tuples
- ``gl2``          subgroups of GL2(F_q): closure, classification, k-exceptional sets
- ``cohomology``   H^0/H^1/H^2 of finite matrix groups, filtration criteria
- ``elliptic``     curves over Q: point counts, Tate's algorithm, conductor
- ``quadfield``    imaginary quadratic fields, reduced forms, Heegner forms
- ``galois_image`` mod-p irreducibility certification by Frobenius scan
- ``periods``      period lattices and the Weierstrass uniformization
- ``kpoints``      exact points over K = Q(sqrt(D))
- ``heegner``      Heegner traces, norm relations, p-divisibility tests
- ``certifier``    hypothesis checking and certificate emission
- ``cli``          the ``heegnercert`` command
"""

from .certifier import (Certificate, CertificationRequest, HypothesisRecord,
                        batch_certify, certify)
from .elliptic import CurveQ
from .quadfield import QuadField, build_field

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificationRequest",
    "CurveQ",
    "HypothesisRecord",
    "QuadField",
    "batch_certify",
    "build_field",
    "certify",
    "__version__",
]
