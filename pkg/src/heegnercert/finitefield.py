"""Finite fields F_{p^f} with explicit polynomial-basis arithmetic.

Elements are tuples of ints of length f (coefficients of 1, x, ..., x^{f-1}
modulo a fixed monic irreducible defining polynomial).  The defining
polynomial is the lexicographically smallest monic irreducible of degree f,
ordering coefficient vectors from the x^{f-1} coefficient down to the
constant term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product


def _poly_mulmod(a, b, mod_poly, p):
    # a, b: coefficient lists (low to high), mod_poly: monic, degree f
    f = len(mod_poly) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce
    for i in range(len(out) - 1, f - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(f):
                out[i - f + j] = (out[i - f + j] - c * mod_poly[j]) % p
    out = out[:f]
    return out + [0] * (f - len(out))


def _poly_powmod(a, n, mod_poly, p):
    f = len(mod_poly) - 1
    result = [1] + [0] * (f - 1)
    base = list(a)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, mod_poly, p)
        base = _poly_mulmod(base, base, mod_poly, p)
        n >>= 1
    return result


def _is_irreducible(poly, p):
    """poly: monic coefficient list low->high of degree f over F_p."""
    f = len(poly) - 1
    if f == 1:
        return True
    x = [0, 1] + [0] * (f - 2)
    xq = _poly_powmod(x, p ** f, poly, p)
    if xq != x:
        return False
    # x^{p^{f/t}} - x must be coprime to poly for every prime t | f
    for t in set(_prime_factors(f)):
        e = f // t
        xe = _poly_powmod(x, p ** e, poly, p)
        diff = [(xe[i] - (1 if i == 1 else 0)) % p for i in range(f)]
        if _poly_gcd_deg(diff, poly, p) > 0:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_gcd_deg(a, b, p):
    a = _strip(a)
    b = _strip(b)
    while a:
        if len(a) > len(b):
            a, b = b, a
        if not a:
            break
        # b mod a
        inv = pow(a[-1], -1, p)
        b = list(b)
        for i in range(len(b) - len(a), -1, -1):
            c = (b[i + len(a) - 1] * inv) % p
            if c:
                for j, aj in enumerate(a):
                    b[i + j] = (b[i + j] - c * aj) % p
        a, b = _strip(b), a
    return len(b) - 1 if b else -1


def _strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


@dataclass(frozen=True)
class FiniteField:
    p: int
    f: int
    poly: tuple  # monic defining polynomial, coefficients low -> high, length f+1

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def zero(self):
        return (0,) * self.f

    @property
    def one(self):
        return (1,) + (0,) * (self.f - 1)

    def element(self, coeffs) -> tuple:
        c = [x % self.p for x in coeffs]
        c += [0] * (self.f - len(c))
        return tuple(c[: self.f])

    def from_int(self, n: int) -> tuple:
        return self.element([n])

    def elements(self):
        """All elements in lexicographic order of coefficient tuples."""
        for c in product(range(self.p), repeat=self.f):
            yield c

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        return tuple(_poly_mulmod(list(a), list(b), list(self.poly), self.p))

    def pow(self, a, n: int):
        n %= (self.q - 1) if a != self.zero else 1
        return tuple(_poly_powmod(list(a), n, list(self.poly), self.p)) if n else self.one

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def order(self, a) -> int:
        if a == self.zero:
            raise ValueError("zero has no multiplicative order")
        n = 1
        cur = a
        while cur != self.one:
            cur = self.mul(cur, a)
            n += 1
            if n > self.q:
                raise ArithmeticError("order search overran the group")
        return n

    def is_square(self, a) -> bool:
        if a == self.zero:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one

    def mul_matrix(self, a) -> list[list[int]]:
        """Multiplication-by-a as an f x f matrix over F_p (column j = a*x^j)."""
        cols = []
        for j in range(self.f):
            e_j = tuple(1 if i == j else 0 for i in range(self.f))
            cols.append(self.mul(a, e_j))
        return [[cols[j][i] for j in range(self.f)] for i in range(self.f)]


def build_field(p: int, f: int) -> FiniteField:
    """F_{p^f} with the lexicographically smallest monic irreducible polynomial.

    Coefficient tuples (c_{f-1}, ..., c_1, c_0) are ordered lexicographically;
    e.g. (3, 2) picks x^2 + 1 and (5, 2) picks x^2 + 2.
    """
    if f < 1:
        raise ValueError("f >= 1 required")
    if f == 1:
        return FiniteField(p, 1, (0, 1))
    for high in product(range(p), repeat=f - 1):
        for c0 in range(p):
            # poly = x^f + high[0] x^{f-1} + ... + high[-1] x + c0
            coeffs_low_high = [c0] + list(reversed(high)) + [1]
            if _is_irreducible(coeffs_low_high, p):
                return FiniteField(p, f, tuple(coeffs_low_high))
    raise ArithmeticError("no irreducible polynomial found (impossible)")
