"""Exact point arithmetic on Weierstrass curves over Q and Q(sqrt(D)).

Elements of K = Q(sqrt(D)) are stored as pairs of Fractions (u, v) meaning
u + v*sqrt(D).  All group-law computations are exact, so any statement this
module verifies (membership on the curve, p*Q == P, linear relations between
points) is a proof, not a numerical observation.

Points are either None (the point at infinity) or a pair (x, y) of KElem.
The group law is the chord-and-tangent law on the long Weierstrass model
    y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6
with the curve coefficients taken as rational integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bigfloat import BigComplex, BigFloat

__all__ = [
    "KElem",
    "kelem",
    "on_curve",
    "ec_neg",
    "ec_add",
    "ec_mul",
    "point_conj",
    "embed_point",
]


@dataclass(frozen=True)
class KElem:
    """u + v*sqrt(D) with exact rational u, v.  D < 0 squarefree-discriminant."""

    D: int
    u: Fraction
    v: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.u, Fraction) or not isinstance(self.v, Fraction):
            raise TypeError("KElem coordinates must be Fractions")

    def __add__(self, other: "KElem") -> "KElem":
        self._chk(other)
        return KElem(self.D, self.u + other.u, self.v + other.v)

    def __sub__(self, other: "KElem") -> "KElem":
        self._chk(other)
        return KElem(self.D, self.u - other.u, self.v - other.v)

    def __mul__(self, other: "KElem") -> "KElem":
        self._chk(other)
        return KElem(
            self.D,
            self.u * other.u + self.v * other.v * self.D,
            self.u * other.v + self.v * other.u,
        )

    def __truediv__(self, other: "KElem") -> "KElem":
        self._chk(other)
        # multiply by the conjugate, divide by the norm
        n = other.u * other.u - other.v * other.v * self.D
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        return KElem(
            self.D,
            (self.u * other.u - self.v * other.v * self.D) / n,
            (self.v * other.u - self.u * other.v) / n,
        )

    def __neg__(self) -> "KElem":
        return KElem(self.D, -self.u, -self.v)

    def conj(self) -> "KElem":
        return KElem(self.D, self.u, -self.v)

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_rational(self) -> bool:
        return self.v == 0

    def scale(self, c: int | Fraction) -> "KElem":
        c = Fraction(c)
        return KElem(self.D, self.u * c, self.v * c)

    def norm(self) -> Fraction:
        return self.u * self.u - self.v * self.v * self.D

    def trace(self) -> Fraction:
        return 2 * self.u

    def _chk(self, other: "KElem") -> None:
        if self.D != other.D:
            raise ValueError("mixed quadratic fields")

    def __str__(self) -> str:
        if self.v == 0:
            return str(self.u)
        return f"{self.u} + {self.v}*sqrt({self.D})"


def kelem(D: int, u: int | Fraction, v: int | Fraction = 0) -> KElem:
    return KElem(D, Fraction(u), Fraction(v))


Point = tuple[KElem, KElem] | None


def _coeffs(E, D: int) -> tuple[KElem, KElem, KElem, KElem, KElem]:
    return tuple(kelem(D, a) for a in (E.a1, E.a2, E.a3, E.a4, E.a6))


def on_curve(E, P: Point, D: int) -> bool:
    if P is None:
        return True
    x, y = P
    a1, a2, a3, a4, a6 = _coeffs(E, D)
    lhs = y * y + a1 * x * y + a3 * y
    rhs = x * x * x + a2 * x * x + a4 * x + a6
    return (lhs - rhs).is_zero()


def ec_neg(E, P: Point, D: int) -> Point:
    if P is None:
        return None
    x, y = P
    a1, _, a3, _, _ = _coeffs(E, D)
    return (x, -y - a1 * x - a3)


def ec_add(E, P: Point, Q: Point, D: int) -> Point:
    """Exact chord-and-tangent addition."""
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, _ = _coeffs(E, D)
    x1, y1 = P
    x2, y2 = Q
    if (x1 - x2).is_zero():
        # same x: either Q = -P or P = Q (the fibre has only two points)
        if (y1 + y2 + a1 * x1 + a3).is_zero():
            return None
        if not (y1 - y2).is_zero():
            raise ValueError("points with equal x are neither equal nor opposite")
        denom = y1 + y1 + a1 * x1 + a3
        lam = (x1 * x1).scale(3) + (a2 * x1).scale(2) + a4 - a1 * y1
        lam = lam / denom
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def ec_mul(E, n: int, P: Point, D: int) -> Point:
    """n*P by binary double-and-add, exact."""
    if n < 0:
        return ec_mul(E, -n, ec_neg(E, P, D), D)
    acc: Point = None
    base = P
    while n:
        if n & 1:
            acc = ec_add(E, acc, base, D)
        n >>= 1
        if n:
            base = ec_add(E, base, base, D)
    return acc


def point_conj(P: Point) -> Point:
    """Galois conjugation on coordinates."""
    if P is None:
        return None
    return (P[0].conj(), P[1].conj())


def embed_point(P: Point, wb: int) -> tuple[BigComplex, BigComplex] | None:
    """Complex embedding sending sqrt(D) to i*sqrt(|D|), at wb mantissa bits."""
    if P is None:
        return None
    D = P[0].D
    if D >= 0:
        raise ValueError("embedding defined for imaginary fields only")
    rt = BigFloat.from_int(-D, wb).sqrt()

    def emb(e: KElem) -> BigComplex:
        re = BigFloat.from_fraction(e.u, wb)
        im = BigFloat.from_fraction(e.v, wb) * rt
        return BigComplex(re, im)

    return (emb(P[0]), emb(P[1]))
