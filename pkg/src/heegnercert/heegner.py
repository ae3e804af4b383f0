"""Heegner point traces over imaginary quadratic fields, with exact certification.

The pipeline: each ideal class of the order O_m gives a CM point tau on
X_0(N); the modular parametrization phi(tau) = sum a_n/n q^n maps it to the
complex points of the curve, and summing over the class group gives the
elliptic log of the trace-to-K point.  The numeric value is then lifted to an
exact point with coordinates in K = Q(sqrt(D)) by rational reconstruction and
checked on the curve equation exactly, so everything downstream (norm
relations, p-divisibility, nontorsion) can be settled by exact algebra,
with the numerics only ever used to propose candidates.

The parametrization is used with normalization constant 1 (the generic case
for the optimal curve of a class).  A wrong constant cannot produce a wrong
positive verdict here: reconstruction would simply fail the exact curve-
equation gate.

Sign and precision conventions follow periods.py: public precisions count
decimal digits, internal mantissas are binary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .arith import is_prime, next_prime, rational_reconstruct
from .bigfloat import BigComplex, BigFloat, bits_for_digits, cexp, pi
from .elliptic import CurveQ, a_ell, a_n_coefficients, count_points, is_good_ordinary
from .kpoints import KElem, Point, ec_add, ec_mul, embed_point, on_curve, point_conj
from .periods import PeriodLattice, periods, weierstrass_xy
from .quadfield import QuadField, heegner_condition, heegner_forms

__all__ = [
    "ReconstructionFailed",
    "NoAuxiliaryPrime",
    "HeegnerResult",
    "DivisibilityReport",
    "NormRelationReport",
    "modular_param",
    "heegner_trace",
    "result_from_log",
    "p_divisibility_test",
    "norm_relation_check",
    "universal_norm_unit",
    "z_K_construction",
    "nontorsion_certificate",
]


class ReconstructionFailed(ArithmeticError):
    """Numeric trace did not lift to an exact point at the working precision."""


class NoAuxiliaryPrime(ArithmeticError):
    pass


def _tenpow(k: int, wb: int) -> BigFloat:
    if k >= 0:
        return BigFloat.from_int(10 ** k, wb)
    return BigFloat.from_int(1, wb) / BigFloat.from_int(10 ** (-k), wb)


def _digits(x: BigFloat) -> float:
    """-log10 |x|, from the binary magnitude.  Large when x is tiny."""
    if x.is_zero():
        return float("inf")
    return -x.mag_exp() * math.log10(2.0)


def modular_param(E: CurveQ, tau: BigComplex, prec: int, a_list=None) -> BigComplex:
    """phi(tau) = sum_{n>=1} (a_n/n) e^{2 pi i n tau}.

    The series is truncated at the first N with 2 r^{N+1}/(1-r) < 10^-prec,
    r = |q|; |a_n| <= d(n) sqrt(n) <= 2n makes that a rigorous tail bound.
    """
    im = float(tau.im)
    if im <= 0:
        raise ValueError("tau must lie in the upper half plane")
    r = math.exp(-2.0 * math.pi * im)
    if r >= 0.999:
        raise ValueError("tau too close to the real axis for a desk-scale sum")
    n_max = int(math.ceil((prec * math.log(10.0) + math.log(2.0 / (1.0 - r)))
                          / (-math.log(r))))
    n_max = max(n_max, 4)
    if a_list is None or len(a_list) < n_max:
        a_list = a_n_coefficients(E, n_max)
    wb = bits_for_digits(prec + 20)
    two_pi = pi(wb).mul_int(2)
    q = cexp(BigComplex(-(two_pi * tau.im), two_pi * tau.re), wb)
    acc = BigComplex.zero(wb)
    qn = BigComplex.one(wb)
    for n in range(1, n_max + 1):
        qn = qn * q
        an = a_list[n - 1]
        if an:
            acc = acc + qn.mul_int(an).div_int(n)
    return acc


def _reconstruct_elem(re: BigFloat, im: BigFloat, rt: BigFloat, D: int,
                      prec: int) -> KElem | None:
    wb = rt.prec
    den_bound = 10 ** (prec // 3)
    tol = _tenpow(-(prec // 2), wb)
    u = rational_reconstruct(re, den_bound, tol)
    if u is None:
        return None
    v = rational_reconstruct(im / rt, den_bound, tol)
    if v is None:
        return None
    return KElem(D, u, v)


def _reconstruct_point(E: CurveQ, D: int, lat: PeriodLattice,
                       z: BigComplex, prec: int) -> Point | None:
    """Exact K-point from an elliptic log, or None.  None never lies:
    a returned point has been checked on the curve equation exactly."""
    xy = weierstrass_xy(lat, z)
    if xy is None:
        return None
    rt = BigFloat.from_int(-D, lat.wb).sqrt()
    px = _reconstruct_elem(xy[0].re, xy[0].im, rt, D, prec)
    if px is None:
        return None
    py = _reconstruct_elem(xy[1].re, xy[1].im, rt, D, prec)
    if py is None:
        return None
    P = (px, py)
    if not on_curve(E, P, D):
        return None
    return P


@dataclass(frozen=True)
class HeegnerResult:
    """Trace-to-K of a Heegner point of the given conductor, certified exact.

    point is None exactly when the trace is the point at infinity.  For an
    affine trace, point is exact, lies on the curve (checked over K), and
    agrees with the numeric value to residual_digits decimal digits.
    """

    curve: CurveQ
    field: QuadField
    conductor: int
    prec: int
    lat: PeriodLattice
    forms: tuple
    z: BigComplex
    point: Point
    residual_digits: float
    conj_consistent: bool
    retried: bool
    manin_assumed: bool = True

    @property
    def is_torsion_zero(self) -> bool:
        return self.point is None

    def summary(self) -> dict:
        d = {
            "conductor": self.conductor,
            "precision_digits": self.prec,
            "forms": [list(f) for f in self.forms],
            "log_re": self.z.re.decimal_str(min(self.prec, 40)),
            "log_im": self.z.im.decimal_str(min(self.prec, 40)),
            "residual_digits": round(self.residual_digits, 1)
            if math.isfinite(self.residual_digits) else None,
            "conjugate_consistent": self.conj_consistent,
            "retried_at_double_precision": self.retried,
            "parametrization_constant_assumed_one": self.manin_assumed,
        }
        if self.point is None:
            d["point"] = None
        else:
            d["point"] = {"x": str(self.point[0]), "y": str(self.point[1])}
        return d


def heegner_trace(E: CurveQ, F: QuadField, conductor: int = 1,
                  prec: int = 60, _retry: bool = True) -> HeegnerResult:
    """Trace of a conductor-m Heegner point down to K, as an exact point."""
    N = E.conductor
    ok, _split = heegner_condition(N, F)
    if not ok:
        raise ValueError(f"level {N} has a nonsplit prime in Q(sqrt({F.D}))")
    if conductor < 1 or math.gcd(conductor, N * F.D) != 1:
        raise ValueError("conductor must be positive and coprime to N*D")
    fs = heegner_forms(F, N, conductor=conductor)
    lat = periods(E, prec)
    wb = lat.wb
    rt_m = BigFloat.from_int(-F.D * conductor * conductor, wb).sqrt()
    # one coefficient list reused for every class: size it for the widest form
    a_max = max(f[0] for f in fs.forms)
    r_min = math.exp(-math.pi * math.sqrt(-F.D * conductor * conductor) / a_max)
    n_max = int(math.ceil((prec * math.log(10.0) + math.log(2.0 / (1.0 - r_min)))
                          / (-math.log(r_min)))) + 4
    a_list = a_n_coefficients(E, n_max)
    z = BigComplex.zero(wb)
    for (a, b, _c) in fs.forms:
        tau = BigComplex(BigFloat.from_fraction(Fraction(-b, 2 * a), wb),
                         rt_m.div_int(2 * a))
        z = z + modular_param(E, tau, prec, a_list=a_list)
    _s, _t, zred = lat.reduce(z)
    if lat.is_lattice_point(z, max(prec // 2, 10)):
        return HeegnerResult(E, F, conductor, prec, lat, fs.forms, zred,
                             None, float("inf"), True, False)
    P = _reconstruct_point(E, F.D, lat, zred, prec)
    if P is None:
        if _retry:
            inner = heegner_trace(E, F, conductor, 2 * prec, _retry=False)
            return replace(inner, retried=True)
        raise ReconstructionFailed(
            f"trace at conductor {conductor} did not lift to an exact point "
            f"(precision {prec} digits)")
    xy = weierstrass_xy(lat, zred)
    ex, ey = embed_point(P, wb)
    res = (ex - xy[0]).abs() + (ey - xy[1]).abs()
    residual_digits = _digits(res)
    # Galois consistency: conjugating the log conjugates the point
    xyc = weierstrass_xy(lat, zred.conj())
    exc, eyc = embed_point(point_conj(P), wb)
    resc = (exc - xyc[0]).abs() + (eyc - xyc[1]).abs()
    conj_ok = _digits(resc) > prec / 2
    if residual_digits < prec / 2:
        if _retry:
            inner = heegner_trace(E, F, conductor, 2 * prec, _retry=False)
            return replace(inner, retried=True)
        raise ReconstructionFailed(
            f"residual too large at conductor {conductor}: "
            f"{residual_digits:.1f} digits")
    return HeegnerResult(E, F, conductor, prec, lat, fs.forms, zred, P,
                         residual_digits, conj_ok, False)


def result_from_log(E: CurveQ, F: QuadField, z: BigComplex, prec: int,
                    lat: PeriodLattice | None = None) -> HeegnerResult:
    """Certify an elliptic log as an exact K-point.  conductor is set to 0 to
    mark the result as synthetic (not a class-group trace)."""
    if lat is None:
        lat = periods(E, prec)
    _s, _t, zred = lat.reduce(z)
    if lat.is_lattice_point(z, max(prec // 2, 10)):
        return HeegnerResult(E, F, 0, prec, lat, (), zred, None,
                             float("inf"), True, False)
    P = _reconstruct_point(E, F.D, lat, zred, prec)
    if P is None:
        raise ReconstructionFailed("log did not lift to an exact point")
    xy = weierstrass_xy(lat, zred)
    ex, ey = embed_point(P, lat.wb)
    res = (ex - xy[0]).abs() + (ey - xy[1]).abs()
    return HeegnerResult(E, F, 0, prec, lat, (), zred, P,
                         _digits(res), True, False)


@dataclass(frozen=True)
class DivisibilityReport:
    """Outcome of testing P in p*E(K).

    A positive verdict is exact: witness satisfies p*witness == P over K.
    A negative verdict is numeric only (no candidate log lifted), so its
    status is 'numeric-negative' rather than a disproof.
    """

    p: int
    divisible: bool
    exact: bool
    status: str
    witness: Point
    witness_shift: tuple | None
    m0_estimate: int | None
    tried: int
    prec: int
    den_bound_digits: int

    def summary(self) -> dict:
        d = {
            "p": self.p,
            "divisible": self.divisible,
            "status": self.status,
            "candidates_tried": self.tried,
            "precision_digits": self.prec,
            "denominator_bound_digits": self.den_bound_digits,
            "m0_estimate": self.m0_estimate,
        }
        if self.witness is not None:
            d["witness"] = {"x": str(self.witness[0]), "y": str(self.witness[1])}
            d["lattice_shift"] = list(self.witness_shift)
        return d


def _divide_once(E: CurveQ, D: int, lat: PeriodLattice, z: BigComplex,
                 target: Point, p: int, prec: int):
    """Search the p^2 lattice classes of z/p for an exact point Q with
    p*Q == target.  Returns (Q, (a, b), z_Q) or None."""
    w1c = BigComplex.from_real(lat.w1)
    w2c = lat.w2
    tried = 0
    for aa in range(p):
        za = z + w1c.mul_int(aa)
        for bb in range(p):
            zc = (za + w2c.mul_int(bb)).div_int(p)
            tried += 1
            Q = _reconstruct_point(E, D, lat, zc, prec)
            if Q is not None and ec_mul(E, p, Q, D) == target:
                return Q, (aa, bb), zc, tried
    return None, None, None, tried


def p_divisibility_test(res: HeegnerResult, p: int,
                        depth_cap: int = 8) -> DivisibilityReport:
    """Decide whether the certified point lies in p*E(K).

    Scans all p^2 candidate logs (z + a w1 + b w2)/p; any candidate that
    reconstructs must pass the exact gate p*Q == P, so a positive answer is
    a theorem.  m0_estimate iterates the division on the witness (capped) to
    estimate the exact power of p dividing the point in E(K)/torsion.
    """
    E, F, lat = res.curve, res.field, res.lat
    prec = res.prec
    if res.is_torsion_zero:
        return DivisibilityReport(p, True, True, "trivial-torsion", None, None,
                                  None, 0, prec, prec // 3)
    Q, shift, zq, tried = _divide_once(E, F.D, lat, res.z, res.point, p, prec)
    if Q is None:
        return DivisibilityReport(p, False, False, "numeric-negative", None,
                                  None, None, tried, prec, prec // 3)
    m0 = 1
    cur_pt, cur_z = Q, zq
    while m0 < depth_cap:
        nxt, _sh, nz, t2 = _divide_once(E, F.D, lat, cur_z, cur_pt, p, prec)
        tried += t2
        if nxt is None:
            break
        cur_pt, cur_z = nxt, nz
        m0 += 1
    return DivisibilityReport(p, True, True, "verified-divisible", Q, shift,
                              m0, tried, prec, prec // 3)


@dataclass(frozen=True)
class NormRelationReport:
    """u_K * y_{K,q} = (a_q - 1 - eta(q)) * y_K, checked on elliptic logs
    modulo the period lattice and, when both traces lifted, by exact algebra."""

    q: int
    a_q: int
    eta_q: int
    coeff: int
    u_K: int
    passed: bool
    residual_digits: float
    exact_match: bool | None
    relation: str
    prec: int

    def summary(self) -> dict:
        return {
            "q": self.q,
            "a_q": self.a_q,
            "eta_q": self.eta_q,
            "coefficient": self.coeff,
            "unit_index": self.u_K,
            "relation": self.relation,
            "passed": self.passed,
            "residual_digits": round(self.residual_digits, 1)
            if math.isfinite(self.residual_digits) else None,
            "exact_match": self.exact_match,
            "precision_digits": self.prec,
        }


def norm_relation_check(E: CurveQ, F: QuadField, q: int, prec: int = 60,
                        y1: HeegnerResult | None = None,
                        yq: HeegnerResult | None = None) -> NormRelationReport:
    if not is_prime(q) or E.conductor % q == 0 or F.D % q == 0:
        raise ValueError("q must be a prime not dividing N*D")
    if y1 is None:
        y1 = heegner_trace(E, F, 1, prec)
    if yq is None:
        yq = heegner_trace(E, F, q, prec)
    lat = y1.lat
    aq = a_ell(E, q)
    eta = F.eta(q)
    coeff = aq - 1 - eta
    delta = yq.z.mul_int(F.u_K) - y1.z.mul_int(coeff)
    s, t, _ = lat.reduce(delta)
    residual_digits = min(_digits(s), _digits(t))
    passed = residual_digits > prec / 2
    # the log identity mod lattice is equivalent to this exact identity
    exact = (ec_mul(E, F.u_K, yq.point, F.D)
             == ec_mul(E, coeff, y1.point, F.D))
    rel = f"{F.u_K}*y_(K,{q}) = ({aq} - 1 - ({eta}))*y_K"
    return NormRelationReport(q, aq, eta, coeff, F.u_K, passed,
                              residual_digits, exact, rel, prec)


def universal_norm_unit(E: CurveQ, F: QuadField, p: int, prec: int = 20) -> dict:
    """Local criterion at p: the trace-twisted Frobenius factors
    (1 - alpha)(1 - alpha*eta(p)) are p-adic units iff a_p is not 1 or eta(p)
    mod p.  Cross-checked against actual point counts over the residue fields
    of the places above p."""
    ordinary, od = is_good_ordinary(E, p, prec)
    if not ordinary:
        raise ValueError(f"p = {p} is not a good ordinary prime for this curve")
    eta = F.eta(p)
    n_p, ap = count_points(E, p)
    assert ap == od.a_p
    if eta == 1:
        counts = (n_p, n_p)
    elif eta == -1:
        counts = ((p + 1) ** 2 - ap * ap,)
    else:
        counts = (n_p,)
    prod = 1
    for c in counts:
        prod = (prod * c) % p
    a0 = od.alpha.residue % p
    eigen_side = ((1 - a0) * (1 - a0 * eta)) % p
    return {
        "p": p,
        "a_p": ap,
        "eta_p": eta,
        "alpha_mod_p": a0,
        "alpha_precision": od.alpha.k,
        "unit": (ap - 1) % p != 0 and (ap - eta) % p != 0,
        "local_counts": list(counts),
        "count_product_mod_p": prod,
        "eigen_side_mod_p": eigen_side,
        "congruence_ok": prod == eigen_side,
    }


def _bezout(a: int, b: int) -> tuple[int, int, int]:
    """(g, r, s) with r*a + s*b = g = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def z_K_construction(E: CurveQ, F: QuadField, prec: int = 60,
                     qbound: int = 200,
                     y1: HeegnerResult | None = None) -> dict:
    """When the unit index is 3 (D = -3), build an exact z with 3*z = y_K.

    Picks the smallest auxiliary prime q (coprime to 3*N*D) whose norm-
    relation coefficient a_q - 1 - eta(q) is prime to 3, then combines y_K
    and y_{K,q} by a Bezout identity.  Every claimed identity is verified by
    exact point algebra before returning.
    """
    if F.u_K != 3:
        raise ValueError("construction applies to unit index 3 (D = -3) only")
    if y1 is None:
        y1 = heegner_trace(E, F, 1, prec)
    if y1.point is None:
        raise ValueError("trace point is torsion; nothing to construct")
    N = E.conductor
    q = 0
    coeff = 0
    cand = 1
    while True:
        cand = next_prime(cand)
        if cand > qbound:
            raise NoAuxiliaryPrime(
                f"no auxiliary prime below {qbound} with coefficient prime to 3")
        if N % cand == 0 or F.D % cand == 0 or cand == 3:
            continue
        c = a_ell(E, cand) - 1 - F.eta(cand)
        if c % 3 != 0:
            q, coeff = cand, c
            break
    yq = heegner_trace(E, F, q, prec)
    rel = norm_relation_check(E, F, q, prec, y1=y1, yq=yq)
    if not rel.passed or rel.exact_match is not True:
        raise ArithmeticError(
            f"norm relation at q = {q} failed; cannot combine traces")
    g, r, s = _bezout(3, coeff)
    assert g == 1
    zpt = ec_add(E, ec_mul(E, r, y1.point, F.D),
                 ec_mul(E, s, yq.point, F.D), F.D)
    three_z = ec_mul(E, 3, zpt, F.D) == y1.point
    c_z = ec_mul(E, coeff, zpt, F.D) == yq.point
    if not (three_z and c_z):
        raise ArithmeticError("Bezout combination failed its exact checks")
    return {
        "q": q,
        "coefficient": coeff,
        "bezout": (r, s),
        "point": zpt,
        "y_K": y1,
        "y_Kq": yq,
        "relation": rel,
        "in_3E": True,
        "checks": {"three_z_is_yK": three_z, "coeff_z_is_yKq": c_z},
    }


def nontorsion_certificate(E: CurveQ, F: QuadField, point: Point,
                           places: int = 5) -> dict:
    """Prove a K-point nontorsion by reducing modulo several places.

    E(K)_tors injects into the reduction at any odd place of good reduction
    unramified in K, so the torsion order divides the gcd g of the group
    orders there; g*P != O is then a proof.  If g*P == O the point is torsion
    and the multiplication is the exhibit.
    """
    if point is None:
        return {"nontorsion": False, "reason": "point at infinity",
                "torsion_bound": 1, "places": [], "multiplier": 0}
    g = 0
    rows = []
    ell = 2
    while len(rows) < places:
        ell = next_prime(ell)
        if E.conductor % ell == 0 or F.D % ell == 0:
            continue
        a = a_ell(E, ell)
        eta = F.eta(ell)
        n = ell + 1 - a if eta == 1 else (ell + 1) ** 2 - a * a
        g = math.gcd(g, n)
        rows.append({"ell": ell, "eta": eta, "order": n})
    Q = ec_mul(E, g, point, F.D)
    return {
        "nontorsion": Q is not None,
        "torsion_bound": g,
        "places": rows,
        "multiplier": g,
    }
