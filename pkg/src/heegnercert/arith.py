"""Integer, p-adic and rational-reconstruction utilities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .bigfloat import BigFloat

is_prime = sympy.isprime
next_prime = sympy.nextprime


def factorint(n: int) -> dict[int, int]:
    return dict(sympy.factorint(n))


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n < 1:
        raise ValueError("kronecker_symbol requires n >= 1")
    result = 1
    # peel off the even part of n with the 2-adic rule (D/2)
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    return result * int(sympy.jacobi_symbol(D, n))


@dataclass(frozen=True)
class PadicUnit:
    """A unit of Z_p known modulo p**k."""
    p: int
    k: int
    residue: int

    def __post_init__(self):
        if self.residue % self.p == 0:
            raise ValueError("residue is not a p-adic unit")

    def inverse(self) -> "PadicUnit":
        return PadicUnit(self.p, self.k, pow(self.residue, -1, self.p ** self.k))


class NotOrdinaryError(ValueError):
    pass


def hensel_unit_root(a_p: int, p: int, k: int) -> PadicUnit:
    """Unit root of x**2 - a_p*x + p in Z_p, mod p**k.

    Requires p not dividing a_p (the quadratic then has one unit root and one
    root of valuation one).  Newton iteration from x = a_p mod p; every lift
    is verified by an exact residue check.
    """
    if a_p % p == 0:
        raise NotOrdinaryError(f"p={p} divides a_p={a_p}: no unit root")
    if k < 1:
        raise ValueError("k >= 1 required")
    x = a_p % p
    cur = 1
    while cur < k:
        cur = min(2 * cur, k)
        mod = p ** cur
        fx = (x * x - a_p * x + p) % mod
        dfx = (2 * x - a_p) % mod
        x = (x - fx * pow(dfx, -1, mod)) % mod
        if (x * x - a_p * x + p) % mod != 0:
            raise ArithmeticError("Hensel lift verification failed")
    mod = p ** k
    alpha = x % mod
    if (alpha * alpha - a_p * alpha + p) % mod != 0:
        raise ArithmeticError("unit root residue check failed")
    return PadicUnit(p, k, alpha)


def cofactor_valuation(alpha: PadicUnit, a_p: int) -> int:
    """Valuation of the second root a_p - alpha (is 1 for an ordinary pair)."""
    p, k = alpha.p, alpha.k
    beta = (a_p - alpha.residue) % (p ** k)
    if beta == 0:
        return k
    v = 0
    while beta % p == 0:
        beta //= p
        v += 1
    return v


def rational_reconstruct(x: BigFloat, den_bound: int, tol: BigFloat) -> Fraction | None:
    """Nearest rational with denominator <= den_bound within tol, else None.

    Walks the continued-fraction convergents of the exact dyadic value of x
    and returns the first convergent that satisfies both constraints.
    Fails closed: returns None when no convergent qualifies.
    """
    fx = x.to_fraction()
    tol_f = tol.to_fraction()
    if tol_f < 0:
        raise ValueError("tolerance must be nonnegative")
    # convergents h_i / k_i of the continued fraction of fx
    num, den = fx.numerator, fx.denominator
    hm1, km1 = 1, 0
    hm2, km2 = 0, 1
    while True:
        a = num // den
        h = a * hm1 + hm2
        k = a * km1 + km2
        if k > den_bound:
            return None
        cand = Fraction(h, k)
        if abs(fx - cand) <= tol_f:
            return cand
        rem = num - a * den
        if rem == 0:
            return None  # exact rational but outside constraints
        num, den = den, rem
        hm2, km2 = hm1, km1
        hm1, km1 = h, k


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); m1, m2 coprime."""
    g = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * g % m2)) % (m1 * m2)


def sqrt_mod(a: int, p: int):
    """A square root of a mod prime p (the smaller of the pair), or None."""
    a %= p
    if p == 2 or a == 0:
        return a % p
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # Tonelli-Shanks with the smallest nonresidue as generator
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)
