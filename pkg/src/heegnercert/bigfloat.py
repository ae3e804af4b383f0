"""Deterministic arbitrary-precision real and complex arithmetic.

Values are scaled integers: x = mantissa * 2**exponent with a fixed mantissa
width (``prec`` bits), rounded to nearest (ties to even).  Everything is pure
integer arithmetic, so identical inputs at identical precision produce
bit-identical results on any platform; no hardware float is consulted.

Only the operations the higher layers need are provided: field operations,
square root, exp (real and complex through :class:`BigComplex`), pi, and the
arithmetic-geometric mean.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def bits_for_digits(digits: int) -> int:
    """Working mantissa width for a decimal digit target."""
    return int(digits * 3.3219281) + 16


def _round_shift(a: int, sh: int) -> int:
    # round-to-nearest, ties-to-even; a >= 0, sh >= 1
    q = a >> sh
    rem = a - (q << sh)
    half = 1 << (sh - 1)
    if rem > half or (rem == half and (q & 1)):
        q += 1
    return q


class BigFloat:
    __slots__ = ("m", "e", "prec")

    def __init__(self, m: int, e: int, prec: int, _normalized: bool = False):
        self.prec = prec
        if _normalized:
            self.m = m
            self.e = e
            return
        if m == 0:
            self.m = 0
            self.e = 0
            return
        s = 1 if m > 0 else -1
        a = abs(m)
        sh = a.bit_length() - prec
        if sh > 0:
            a = _round_shift(a, sh)
            e += sh
            if a.bit_length() > prec:  # rounding carry, e.g. 0b1111 -> 0b10000
                a >>= 1
                e += 1
        elif sh < 0:
            a <<= -sh
            e += sh
        self.m = s * a
        self.e = e

    # ----- constructors -------------------------------------------------
    @staticmethod
    def from_int(n: int, prec: int) -> "BigFloat":
        return BigFloat(n, 0, prec)

    @staticmethod
    def from_fraction(fr: Fraction, prec: int) -> "BigFloat":
        num, den = fr.numerator, fr.denominator
        if num == 0:
            return BigFloat(0, 0, prec)
        s = 1 if num > 0 else -1
        num = abs(num)
        k = prec + 4 + max(0, den.bit_length() - num.bit_length())
        q, r = divmod(num << k, den)
        m = (q << 1) | (1 if r else 0)
        return BigFloat(s * m, -k - 1, prec)

    def to_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e, 1)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:  # diagnostics only
        try:
            return float(self.to_fraction())
        except OverflowError:
            return float("inf") if self.m > 0 else float("-inf")

    # ----- predicates / helpers -----------------------------------------
    def is_zero(self) -> bool:
        return self.m == 0

    def sign(self) -> int:
        return 0 if self.m == 0 else (1 if self.m > 0 else -1)

    def mag_exp(self) -> int:
        """Exponent of the leading bit: |x| is in [2**mag_exp, 2**(mag_exp+1))."""
        if self.m == 0:
            return -(1 << 30)
        return self.e + abs(self.m).bit_length() - 1

    def ldexp(self, k: int) -> "BigFloat":
        return BigFloat(self.m, self.e + k, self.prec, _normalized=True)

    def abs(self) -> "BigFloat":
        return BigFloat(abs(self.m), self.e, self.prec, _normalized=True)

    # ----- ring operations ----------------------------------------------
    def __neg__(self) -> "BigFloat":
        return BigFloat(-self.m, self.e, self.prec, _normalized=True)

    def __add__(self, other: "BigFloat") -> "BigFloat":
        prec = max(self.prec, other.prec)
        if self.m == 0:
            return BigFloat(other.m, other.e, prec)
        if other.m == 0:
            return BigFloat(self.m, self.e, prec)
        a, b = self, other
        if a.e < b.e:
            a, b = b, a
        d = a.e - b.e
        cap = prec + 4
        if d > cap:
            # b only contributes a sticky bit
            m = (a.m << cap) + (1 if b.m > 0 else -1)
            return BigFloat(m, a.e - cap, prec)
        return BigFloat((a.m << d) + b.m, b.e, prec)

    def __sub__(self, other: "BigFloat") -> "BigFloat":
        return self + (-other)

    def __mul__(self, other: "BigFloat") -> "BigFloat":
        return BigFloat(self.m * other.m, self.e + other.e,
                        max(self.prec, other.prec))

    def mul_int(self, n: int) -> "BigFloat":
        return BigFloat(self.m * n, self.e, self.prec)

    def div_int(self, n: int) -> "BigFloat":
        if n == 0:
            raise ZeroDivisionError("BigFloat division by zero")
        s = 1
        if n < 0:
            s, n = -1, -n
        if self.m == 0:
            return BigFloat(0, 0, self.prec)
        k = self.prec + 4 + n.bit_length()
        q, r = divmod(abs(self.m) << k, n)
        m = (q << 1) | (1 if r else 0)
        return BigFloat(s * (m if self.m > 0 else -m), self.e - k - 1, self.prec)

    def __truediv__(self, other: "BigFloat") -> "BigFloat":
        if other.m == 0:
            raise ZeroDivisionError("BigFloat division by zero")
        prec = max(self.prec, other.prec)
        if self.m == 0:
            return BigFloat(0, 0, prec)
        s = 1 if (self.m > 0) == (other.m > 0) else -1
        k = prec + 4 + max(0, abs(other.m).bit_length() - abs(self.m).bit_length())
        q, r = divmod(abs(self.m) << k, abs(other.m))
        m = (q << 1) | (1 if r else 0)
        return BigFloat(s * m, self.e - other.e - k - 1, prec)

    def sqrt(self) -> "BigFloat":
        if self.m < 0:
            raise ValueError("BigFloat.sqrt of negative value")
        if self.m == 0:
            return BigFloat(0, 0, self.prec)
        k = max(0, 2 * (self.prec + 2) - self.m.bit_length())
        if (self.e - k) & 1:
            k += 1
        a = self.m << k
        s = isqrt(a)
        r = a - s * s
        m = (s << 1) | (1 if r else 0)
        return BigFloat(m, (self.e - k) // 2 - 1, self.prec)

    # ----- comparisons (exact) ------------------------------------------
    def _cmp(self, other: "BigFloat") -> int:
        sa, sb = self.sign(), other.sign()
        if sa != sb:
            return 1 if sa > sb else -1
        if sa == 0:
            return 0
        d = self.e - other.e
        if d >= 0:
            l, r = self.m << d, other.m
        else:
            l, r = self.m, other.m << -d
        return 0 if l == r else (1 if l > r else -1)

    def __lt__(self, o): return self._cmp(o) < 0
    def __le__(self, o): return self._cmp(o) <= 0
    def __gt__(self, o): return self._cmp(o) > 0
    def __ge__(self, o): return self._cmp(o) >= 0

    def __eq__(self, o):
        return isinstance(o, BigFloat) and self._cmp(o) == 0

    def __hash__(self):
        return hash(self.to_fraction())

    # ----- conversions ---------------------------------------------------
    def floor_int(self) -> int:
        if self.e >= 0:
            return self.m << self.e
        return self.m >> -self.e

    def round_int(self) -> int:
        """Nearest integer, ties away from zero (used for lattice reduction)."""
        if self.e >= 0:
            return self.m << self.e
        half = self.abs() + BigFloat(1, -1, self.prec, _normalized=True)
        n = half.floor_int()
        return n if self.m >= 0 else -n

    def decimal_str(self, digits: int) -> str:
        """Deterministic fixed-point decimal rendering with `digits` fractional digits."""
        fr = self.to_fraction()
        scaled = fr * 10 ** digits
        n = scaled.numerator // scaled.denominator  # floor
        if scaled.numerator % scaled.denominator:
            # round half up on the absolute value
            n2 = (2 * abs(scaled.numerator) + scaled.denominator) // (2 * scaled.denominator)
            n = n2 if fr >= 0 else -n2
        sign = "-" if n < 0 else ""
        n = abs(n)
        s = str(n).rjust(digits + 1, "0")
        return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"

    def __repr__(self):
        return f"BigFloat({self.decimal_str(min(20, max(1, self.prec // 4)))})"


# ---------------------------------------------------------------------------
# constants and transcendental functions
# ---------------------------------------------------------------------------

_PI_CACHE: dict[int, BigFloat] = {}


def pi(prec: int) -> BigFloat:
    """pi by the arithmetic-geometric mean (Brent-Salamin)."""
    if prec in _PI_CACHE:
        return _PI_CACHE[prec]
    wp = prec + 24
    one = BigFloat.from_int(1, wp)
    a = one
    b = one / BigFloat.from_int(2, wp).sqrt()
    t = BigFloat.from_fraction(Fraction(1, 4), wp)
    x = 1
    for _ in range(8 * 32):
        y = a
        a = (a + b).div_int(2)
        b = (y * b).sqrt()
        d = y - a
        t = t - (d * d).mul_int(x)
        x *= 2
        if d.is_zero() or d.mag_exp() < a.mag_exp() - wp + 4:
            break
    s = a + b
    val = (s * s) / t.ldexp(2)
    out = BigFloat(val.m, val.e, prec)
    _PI_CACHE[prec] = out
    return out


def agm(a: BigFloat, b: BigFloat) -> BigFloat:
    """Arithmetic-geometric mean of two positive reals."""
    if a.sign() <= 0 or b.sign() <= 0:
        raise ValueError("agm needs positive arguments")
    prec = max(a.prec, b.prec)
    for _ in range(prec + 64):
        d = a - b
        if d.is_zero() or d.mag_exp() < a.mag_exp() - prec + 3:
            break
        a, b = (a + b).div_int(2), (a * b).sqrt()
    return (a + b).div_int(2)


class BigComplex:
    __slots__ = ("re", "im")

    def __init__(self, re: BigFloat, im: BigFloat):
        self.re = re
        self.im = im

    @staticmethod
    def from_real(x: BigFloat) -> "BigComplex":
        return BigComplex(x, BigFloat(0, 0, x.prec))

    @staticmethod
    def zero(prec: int) -> "BigComplex":
        return BigComplex(BigFloat(0, 0, prec), BigFloat(0, 0, prec))

    @staticmethod
    def one(prec: int) -> "BigComplex":
        return BigComplex(BigFloat.from_int(1, prec), BigFloat(0, 0, prec))

    def __add__(self, o): return BigComplex(self.re + o.re, self.im + o.im)
    def __sub__(self, o): return BigComplex(self.re - o.re, self.im - o.im)
    def __neg__(self): return BigComplex(-self.re, -self.im)

    def __mul__(self, o: "BigComplex") -> "BigComplex":
        return BigComplex(self.re * o.re - self.im * o.im,
                          self.re * o.im + self.im * o.re)

    def mul_int(self, n: int) -> "BigComplex":
        return BigComplex(self.re.mul_int(n), self.im.mul_int(n))

    def div_int(self, n: int) -> "BigComplex":
        return BigComplex(self.re.div_int(n), self.im.div_int(n))

    def mul_real(self, x: BigFloat) -> "BigComplex":
        return BigComplex(self.re * x, self.im * x)

    def conj(self) -> "BigComplex":
        return BigComplex(self.re, -self.im)

    def norm2(self) -> BigFloat:
        return self.re * self.re + self.im * self.im

    def abs(self) -> BigFloat:
        return self.norm2().sqrt()

    def __truediv__(self, o: "BigComplex") -> "BigComplex":
        n2 = o.norm2()
        num = self * o.conj()
        return BigComplex(num.re / n2, num.im / n2)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def mag_exp(self) -> int:
        return max(self.re.mag_exp(), self.im.mag_exp())

    def ldexp(self, k: int) -> "BigComplex":
        return BigComplex(self.re.ldexp(k), self.im.ldexp(k))

    def __repr__(self):
        return f"BigComplex({self.re!r}, {self.im!r})"


def cexp(z: BigComplex, prec: int) -> BigComplex:
    """exp(z) for complex z by argument halving plus Taylor series.

    The argument is halved k times until small, the series is summed at an
    elevated working precision (each of the k squarings roughly doubles the
    relative error), then the result is rounded back to `prec`.
    """
    mag = z.mag_exp()
    k = max(0, mag + 5)
    wp = prec + 2 * k + 48
    w = BigComplex(BigFloat(z.re.m, z.re.e, wp), BigFloat(z.im.m, z.im.e, wp)).ldexp(-k)
    one = BigComplex.one(wp)
    term = one
    total = one
    limit = -(wp + 8)
    for j in range(1, 4 * wp):
        term = (term * w).div_int(j)
        total = total + term
        if term.is_zero() or term.mag_exp() < limit:
            break
    for _ in range(k):
        total = total * total
    return BigComplex(BigFloat(total.re.m, total.re.e, prec),
                      BigFloat(total.im.m, total.im.e, prec))


def exp_real(x: BigFloat, prec: int) -> BigFloat:
    return cexp(BigComplex.from_real(x), prec).re
