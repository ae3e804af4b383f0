"""Period lattices and the Weierstrass uniformization, to arbitrary precision.

Periods come from the AGM applied to the real roots of the normal-form cubic.
Every computed lattice is certified before use: g2 and g3 are reconstructed
from the basis via Eisenstein q-series and must agree with c4/12 and c6/216
to within the stated tolerance, which pins down the lattice exactly (a wrong
or non-basis pair cannot pass, since g2, g3 determine the lattice).

For these bases q = e^{2 pi i tau} is always real: positive when the curve
has three real 2-division values, negative (tau = 1/2 + iy) otherwise.

Precision convention: public entry points take decimal digits; internal
BigFloat construction uses mantissa bits (wb).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bigfloat import (BigFloat, BigComplex, pi, agm, cexp, exp_real,
                       bits_for_digits)
from .elliptic import CurveQ


class PrecisionLoss(ArithmeticError):
    pass


def _tenpow(k: int, wb: int) -> BigFloat:
    """10**k (k may be negative) at wb mantissa bits."""
    if k >= 0:
        return BigFloat.from_int(10 ** k, wb)
    return BigFloat.from_fraction(Fraction(1, 10 ** (-k)), wb)


def _newton_root_cubic(c3: int, c1: int, c0: int, seed: float, wb: int) -> BigFloat:
    """A simple real root of c3 s^3 + c1 s + c0 near seed, wb mantissa bits."""
    x = BigFloat.from_fraction(Fraction(seed).limit_denominator(10 ** 12), wb)
    for _ in range(80):
        f = (x * x * x).mul_int(c3) + x.mul_int(c1) + BigFloat.from_int(c0, wb)
        fp = (x * x).mul_int(3 * c3) + BigFloat.from_int(c1, wb)
        if fp.is_zero():
            raise PrecisionLoss("vanishing derivative in root refinement")
        step = f / fp
        x = x - step
        if step.is_zero() or step.mag_exp() < x.mag_exp() - wb + 8:
            return x
    raise PrecisionLoss("cubic root refinement did not converge")


def _cubic_real_roots(c4: int, c6: int, wb: int):
    """Real roots of 4s^3 - 3 c4 s - c6 (scaled 2-division values s = 6e)."""
    import numpy as np
    rough = np.roots([4.0, 0.0, -3.0 * c4, -c6])
    reals = sorted(r.real for r in rough if abs(r.imag) < 1e-7 * (1 + abs(r)))
    if len(reals) == 2:         # numerical artifact: a cubic has 1 or 3
        reals = sorted(r.real for r in rough)
    return [_newton_root_cubic(4, -3 * c4, -c6, s, wb) for s in reals]


@dataclass
class PeriodLattice:
    prec: int                   # decimal digits
    wb: int                     # mantissa bits actually carried
    w1: BigFloat                # real period, positive
    tau_re_half: bool           # tau = 1/2 + i tau_im if True else i tau_im
    tau_im: BigFloat            # > 0
    q: BigFloat                 # e^{2 pi i tau}, real (negative iff tau_re_half)
    curve: CurveQ
    oracle_rel_err: float       # Eisenstein reconstruction residual

    @property
    def w2(self) -> BigComplex:
        im = self.w1 * self.tau_im
        if self.tau_re_half:
            return BigComplex(self.w1.div_int(2), im)
        return BigComplex(BigFloat.from_int(0, self.wb), im)

    def tau(self) -> BigComplex:
        re = (BigFloat.from_fraction(Fraction(1, 2), self.wb)
              if self.tau_re_half else BigFloat.from_int(0, self.wb))
        return BigComplex(re, self.tau_im)

    def reduce(self, z: BigComplex):
        """(s, t, z') with z = s w1 + t w2 + lattice, s, t in [-1/2, 1/2)."""
        w2 = self.w2
        half = BigFloat.from_fraction(Fraction(1, 2), self.wb)
        t_full = z.im / w2.im
        t_int = (t_full + half).floor_int()
        t = t_full - BigFloat.from_int(t_int, self.wb)
        s_full = (z.re - t * w2.re - BigFloat.from_int(t_int, self.wb) * w2.re) / self.w1
        s_int = (s_full + half).floor_int()
        s = s_full - BigFloat.from_int(s_int, self.wb)
        zred = BigComplex(s * self.w1 + t * w2.re, t * w2.im)
        return s, t, zred

    def is_lattice_point(self, z: BigComplex, tol_digits: int) -> bool:
        s, t, _ = self.reduce(z)
        bound = _tenpow(-tol_digits, self.wb)
        return s.abs() < bound and t.abs() < bound


def _eisenstein_g2g3(w1: BigFloat, q: BigFloat, wb: int):
    """(g2, g3) of the lattice Z w1 + Z w1 tau from the real nome q."""
    one = BigFloat.from_int(1, wb)
    e4 = one
    e6 = one
    qn = q
    n = 1
    while True:
        t = qn / (one - qn)
        t4 = t.mul_int(240 * n ** 3)
        t6 = t.mul_int(504 * n ** 5)
        e4 = e4 + t4
        e6 = e6 - t6
        if t.is_zero() or max(t4.mag_exp(), t6.mag_exp()) < -wb - 16:
            break
        qn = qn * q
        n += 1
        if n > 40 * wb:
            raise PrecisionLoss("Eisenstein series converges too slowly")
    lam = pi(wb).ldexp(1) / w1
    lam2 = lam * lam
    lam4 = lam2 * lam2
    return lam4 * e4.div_int(12), lam4 * lam2 * e6.div_int(216)


def periods(E: CurveQ, prec: int) -> PeriodLattice:
    """Certified period lattice of the minimal model, prec >= 30 digits."""
    if prec < 30:
        raise ValueError("prec must be at least 30 digits")
    wb = bits_for_digits(prec + 20)
    c4, c6 = E.c4, E.c6
    roots = _cubic_real_roots(c4, c6, wb)
    PI = pi(wb)
    if E.disc > 0:
        if len(roots) != 3:
            raise PrecisionLoss("positive discriminant needs three real roots")
        s3, s2, s1 = roots      # ascending; e_i = s_i / 6
        d13 = ((s1 - s3).div_int(6)).sqrt()
        d12 = ((s1 - s2).div_int(6)).sqrt()
        d23 = ((s2 - s3).div_int(6)).sqrt()
        w1 = PI / agm(d13, d12)
        w_im = PI / agm(d13, d23)
        tau_re_half = False
        tau_im = w_im / w1
    else:
        if len(roots) != 1:
            raise PrecisionLoss("negative discriminant needs one real root")
        e1 = roots[0].div_int(6)
        g2 = BigFloat.from_fraction(Fraction(c4, 12), wb)
        asq = (e1 * e1).mul_int(3) - g2.div_int(4)
        if asq.sign() <= 0:
            raise PrecisionLoss("degenerate complex-root geometry")
        A = asq.sqrt()
        sA = A.sqrt()
        e1_3 = e1.mul_int(3)
        w1 = PI.ldexp(1) / agm(sA.ldexp(1), (A.ldexp(1) + e1_3).sqrt())
        w_im = PI.ldexp(1) / agm(sA.ldexp(1), (A.ldexp(1) - e1_3).sqrt())
        tau_re_half = True
        # w2 = (w1 + i w_im)/2, so Im tau = (w_im / w1) / 2
        tau_im = (w_im / w1).div_int(2)
    if tau_im.sign() <= 0:
        raise PrecisionLoss("non-positive Im tau")
    if float(tau_im) < 0.05:
        raise PrecisionLoss("lattice too skew for the q-series oracle")
    qabs = exp_real(-(PI.ldexp(1) * tau_im), wb)
    q = -qabs if tau_re_half else qabs
    g2l, g3l = _eisenstein_g2g3(w1, q, wb)
    tg2 = BigFloat.from_fraction(Fraction(c4, 12), wb)
    tg3 = BigFloat.from_fraction(Fraction(c6, 216), wb)
    err = BigFloat.from_int(0, wb)
    for got, want in ((g2l, tg2), (g3l, tg3)):
        scale = want.abs() if not want.is_zero() else BigFloat.from_int(1, wb)
        e = (got - want).abs() / scale
        if err < e:
            err = e
    if not err < _tenpow(-(prec - 10), wb):
        raise PrecisionLoss(
            f"lattice failed the Eisenstein oracle: rel err {float(err):.3e}")
    return PeriodLattice(prec=prec, wb=wb, w1=w1, tau_re_half=tau_re_half,
                         tau_im=tau_im, q=q, curve=E,
                         oracle_rel_err=float(err))


# ---------------------------------------------------------------------------
# Weierstrass functions and point recovery
# ---------------------------------------------------------------------------

def _p_series(lat: PeriodLattice, u: BigComplex, wb: int):
    """(P, P') scaled: P = (w1/2 pi i)^2 p(z), P' = (w1/2 pi i)^3 p'(z)."""
    one = BigComplex.one(wb)
    q = lat.q
    d = one - u
    if d.abs().mag_exp() < -wb + 8:
        raise PrecisionLoss("evaluation too close to a lattice point")
    dd = d * d
    p = BigComplex(BigFloat.from_fraction(Fraction(1, 12), wb),
                   BigFloat.from_int(0, wb)) + u / dd
    pp = u * (one + u) / (dd * d)
    uinv = one / u
    qn = q
    n = 1
    while True:
        qnu = BigComplex(qn * u.re, qn * u.im)
        qnui = BigComplex(qn * uinv.re, qn * uinv.im)
        d1 = one - qnu
        d2 = one - qnui
        dq = BigFloat.from_int(1, wb) - qn
        term_p = qnu / (d1 * d1) + qnui / (d2 * d2) \
            - BigComplex((qn / (dq * dq)).ldexp(1), BigFloat.from_int(0, wb))
        term_pp = qnu * (one + qnu) / (d1 * d1 * d1) \
            - qnui * (one + qnui) / (d2 * d2 * d2)
        p = p + term_p
        pp = pp + term_pp
        if max(term_p.abs().mag_exp(), term_pp.abs().mag_exp()) < -wb - 16:
            break
        qn = qn * q
        n += 1
        if n > 40 * wb:
            raise PrecisionLoss("p-series converges too slowly")
    return p, pp


def weierstrass_xy(lat: PeriodLattice, z: BigComplex):
    """Coordinates on the curve's own model at log z, or None at the origin.

    x = p(z) - b2/12, y = (p'(z) - a1 x - a3)/2 for the stored minimal model.
    """
    wb = lat.wb
    s, t, _ = lat.reduce(z)
    tolbits = bits_for_digits(lat.prec // 2)
    if max(s.abs().mag_exp(), t.abs().mag_exp()) < -tolbits:
        return None
    tau = lat.tau()
    w = BigComplex(s + t * tau.re, t * tau.im)
    twopi = pi(wb).ldexp(1)
    u = cexp(BigComplex(-(twopi * w.im), twopi * w.re), wb)
    P, PP = _p_series(lat, u, wb)
    lam = twopi / lat.w1
    lam2 = lam * lam
    p_val = BigComplex(-(lam2 * P.re), -(lam2 * P.im))        # (i lam)^2 = -lam^2
    lam3 = lam2 * lam
    pp_val = BigComplex(lam3 * PP.im, -(lam3 * PP.re))        # (i lam)^3 = -i lam^3
    E = lat.curve
    b2 = E.b_inv[0]
    x = p_val - BigComplex(BigFloat.from_fraction(Fraction(b2, 12), wb),
                           BigFloat.from_int(0, wb))
    y = (pp_val - x.mul_int(E.a1)
         - BigComplex(BigFloat.from_int(E.a3, wb), BigFloat.from_int(0, wb))
         ).div_int(2)
    return x, y


def point_from_log(lat: PeriodLattice, z: BigComplex):
    return weierstrass_xy(lat, z)
