"""Imaginary quadratic fields through binary quadratic forms.

Class groups are represented concretely: one reduced primitive form per
class, found by direct enumeration of the reduced-form inequalities.  Level
structure for Heegner points is a congruence on the middle coefficient
(N | a, b fixed mod 2N), located by bounded search and matched back to the
reduced representatives by the reduction algorithm.  Composition is never
needed and not implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .arith import factorint, is_prime, kronecker_symbol


class NotFundamental(ValueError):
    pass


class SearchExhausted(ArithmeticError):
    pass


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def unit_half_count(D: int) -> int:
    """u_K = #(O_K^x / {+-1}): 3 for D = -3, 2 for D = -4, else 1."""
    if D == -3:
        return 3
    if D == -4:
        return 2
    return 1


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

def reduce_form(a: int, b: int, c: int):
    """The reduced form properly equivalent to (a, b, c), disc < 0, a > 0."""
    D = b * b - 4 * a * c
    if D >= 0 or a <= 0:
        raise ValueError("needs a positive definite form")
    while True:
        r = b % (2 * a)
        if r > a:
            r -= 2 * a
        b = r
        c = (b * b - D) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0 and a == c:
        b = -b
    if b * b - 4 * a * c != D or not is_reduced(a, b, c):
        raise ArithmeticError("reduction did not terminate on a reduced form")
    return a, b, c


def is_reduced(a: int, b: int, c: int) -> bool:
    if not (abs(b) <= a <= c):
        return False
    if b < 0 and (abs(b) == a or a == c):
        return False
    return True


def reduced_forms(D: int, primitive_only: bool = True):
    """All reduced (primitive) forms of discriminant D < 0, sorted."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("discriminant must be negative, 0 or 1 mod 4")
    out = []
    for b in range(abs(D) % 2, isqrt(abs(D) // 3) + 1, 2):
        m = (b * b - D) // 4
        for a in range(max(b, 1), isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            if primitive_only and gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
            if 0 < b < a < c:
                out.append((a, -b, c))
    return tuple(sorted(out))


def class_number(D: int) -> int:
    return len(reduced_forms(D))


@dataclass(frozen=True)
class QuadField:
    D: int
    h: int
    u_K: int
    forms: tuple

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise NotFundamental(f"{self.D} is not a fundamental discriminant")
        if len(self.forms) != self.h:
            raise ValueError("form count disagrees with class number")
        for (a, b, c) in self.forms:
            if b * b - 4 * a * c != self.D or not is_reduced(a, b, c):
                raise ValueError(f"non-reduced or wrong-disc form {(a, b, c)}")
            if gcd(gcd(a, b), c) != 1:
                raise ValueError(f"imprimitive form {(a, b, c)}")

    def eta(self, ell: int) -> int:
        return kronecker_symbol(self.D, ell)

    def principal_form(self):
        if self.D % 4 == 0:
            return (1, 0, -self.D // 4)
        return (1, 1, (1 - self.D) // 4)


def build_field(D: int) -> QuadField:
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    forms = reduced_forms(D)
    return QuadField(D=D, h=len(forms), u_K=unit_half_count(D), forms=forms)


# ---------------------------------------------------------------------------
# Heegner level structure
# ---------------------------------------------------------------------------

def heegner_condition(N: int, F: QuadField):
    """(flag, {ell: eta(ell)}): every prime dividing N must split in K."""
    if N < 1:
        raise ValueError("N must be positive")
    evidence = {ell: F.eta(ell) for ell in sorted(factorint(N))}
    return all(v == 1 for v in evidence.values()), evidence


@dataclass(frozen=True)
class HeegnerFormSet:
    level: int
    disc: int            # conductor^2 * D_K
    conductor: int
    beta: int            # beta^2 = D_K (mod 4N); forms have b = conductor*beta (mod 2N)
    forms: tuple         # one per class of Pic(O_conductor), sorted
    reduced_classes: tuple

    def tau_points(self):
        """Upper-half-plane parameters (-b + sqrt(disc)) / 2a as (a, b) pairs."""
        return tuple((a, b) for (a, b, _) in self.forms)


def _smallest_beta(D: int, N: int) -> int:
    for beta in range(2 * N):
        if (beta * beta - D) % (4 * N) == 0:
            return beta
    raise SearchExhausted(f"no square root of {D} mod {4 * N}")


def pic_order(F: QuadField, conductor: int) -> int:
    """#Pic(O_m) for m = 1 or a prime not dividing D_K."""
    if conductor == 1:
        return F.h
    if not is_prime(conductor) or F.D % conductor == 0:
        raise ValueError("conductor must be 1 or a prime not dividing D_K")
    q = conductor
    num = F.h * (q - F.eta(q))
    if num % F.u_K:
        raise ArithmeticError("ring class number is not integral")
    return num // F.u_K


def heegner_forms(F: QuadField, N: int, conductor: int = 1) -> HeegnerFormSet:
    """Per-class forms (a, b, c), N | a, b = conductor*beta (mod 2N).

    Discriminant conductor^2 * D_K; one form per class of Pic(O_conductor),
    each matched to its reduced representative by explicit reduction.
    """
    ok, evidence = heegner_condition(N, F)
    if not ok:
        raise ValueError(f"Heegner condition fails at {evidence}")
    if conductor != 1 and (not is_prime(conductor)
                           or (N * F.D) % conductor == 0):
        raise ValueError("conductor must be 1 or a prime not dividing N*D_K")
    disc = conductor * conductor * F.D
    beta = _smallest_beta(F.D, N)
    b_res = (conductor * beta) % (2 * N)
    classes = reduced_forms(disc)
    expected = pic_order(F, conductor)
    if len(classes) != expected:
        raise ArithmeticError(
            f"reduced-form count {len(classes)} disagrees with the ring "
            f"class number {expected}")
    found: dict = {}
    bound = 4 * N * (isqrt(abs(disc)) + 1)
    while len(found) < len(classes):
        if bound > 2 ** 20:
            raise SearchExhausted(f"form search bound overflow at {bound}")
        for a in range(N, bound + 1, N):
            # [b_res, b_res + 2a) holds one b per x-translation orbit
            for b in range(b_res, b_res + 2 * a, 2 * N):
                if (b * b - disc) % (4 * a):
                    continue
                c = (b * b - disc) // (4 * a)
                if gcd(gcd(a, b), c) != 1:
                    continue
                rep = reduce_form(a, b, c)
                if rep in classes and rep not in found:
                    found[rep] = (a, b, c)
        if len(found) < len(classes):
            bound *= 2
    forms = tuple(sorted(found.values()))
    return HeegnerFormSet(level=N, disc=disc, conductor=conductor, beta=beta,
                          forms=forms,
                          reduced_classes=tuple(sorted(found.keys())))


# ---------------------------------------------------------------------------
# genus decomposition and ring class degrees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenusData:
    ramified: tuple          # primes dividing D_K
    factors: dict            # q -> prime discriminant D_q
    generators: tuple        # "sqrt(D_q)" strings for the genus field


def genus_decomposition(F: QuadField) -> GenusData:
    D = F.D
    ramified = tuple(sorted(factorint(abs(D))))
    factors = {}
    for q in ramified:
        if q == 2:
            continue
        factors[q] = q if q % 4 == 1 else -q
    if 2 in ramified:
        rest = 1
        for v in factors.values():
            rest *= v
        factors[2] = D // rest
    prod = 1
    for q, dq in factors.items():
        prod *= dq
        if dq % 4 not in (0, 1):
            raise ArithmeticError(f"factor {dq} is not a discriminant")
        adq = abs(dq)
        while adq % q == 0:
            adq //= q
        if adq != 1:
            raise ArithmeticError(f"factor {dq} is not a power of {q}")
    if prod != D:
        raise ArithmeticError("prime discriminant factors do not multiply to D")
    gens = tuple(f"sqrt({factors[q]})" for q in sorted(factors))
    return GenusData(ramified=ramified, factors=factors, generators=gens)


@dataclass(frozen=True)
class RingClassDegrees:
    p: int
    eta_p: int
    deg_H1_over_K: int
    deg_Hp_over_H1: int
    deg_tower_step: int      # [H_{p^{n+1}} : H_{p^n}] = p for n >= 1
    h: int
    u_K: int

    def pic_order(self, n: int) -> int:
        """#Pic(O_{p^n}) for n >= 0."""
        if n == 0:
            return self.h
        return (self.h * self.p ** (n - 1)
                * (self.p - self.eta_p)) // self.u_K


def ring_class_degrees(F: QuadField, p: int) -> RingClassDegrees:
    if not is_prime(p):
        raise ValueError("p must be prime")
    eta = F.eta(p)
    num = p - eta
    if num % F.u_K:
        raise ArithmeticError("degree (p - eta)/u_K is not integral")
    return RingClassDegrees(p=p, eta_p=eta, deg_H1_over_K=F.h,
                            deg_Hp_over_H1=num // F.u_K, deg_tower_step=p,
                            h=F.h, u_K=F.u_K)
