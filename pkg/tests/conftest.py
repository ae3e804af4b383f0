"""Shared fixtures: the fixed curve corpus used across the suite."""

import pytest

from heegnercert.elliptic import CurveQ

# Ten minimal models spanning good/multiplicative/additive reduction,
# CM and non-CM, ranks 0..2, conductors 11..389.
CORPUS_COEFFS = (
    (0, 0, 1, -1, 0),       # conductor 37, rank 1
    (0, -1, 1, -10, -20),   # conductor 11, torsion Z/5
    (0, 1, 1, -2, 0),       # conductor 389, rank 2
    (0, 1, 1, 0, 0),        # conductor 43, rank 1
    (1, 1, 1, -2, 0),       # conductor 79, rank 1
    (1, 0, 1, 4, -6),       # conductor 14, torsion Z/6
    (0, 0, 1, 0, -7),       # conductor 27, CM by -27
    (1, -1, 0, -2, -1),     # conductor 49, CM by -7
    (0, 0, 0, -1, 0),       # conductor 32, CM by -4, full 2-torsion
    (1, 1, 1, -5, 0),       # conductor 235, rank 1, Tamagawa 3
)


@pytest.fixture(scope="session")
def corpus():
    return [CurveQ.from_coeffs(c) for c in CORPUS_COEFFS]
