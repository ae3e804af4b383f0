"""Mod-p Galois image diagnostics from Frobenius trace scans.

The decisive test is a single good prime q whose Frobenius characteristic
polynomial x^2 - a_q x + q is irreducible mod p: such a Frobenius has no
eigenvector, so the mod-p representation cannot be reducible.  The converse
direction is only ever reported as a suspicion (the scan is finite), never
as a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime
from .elliptic import CurveQ, count_points
from .quadfield import QuadField


class PreconditionUnmet(ValueError):
    pass


@dataclass(frozen=True)
class FrobRow:
    q: int
    a_q: int
    a_q_mod_p: int
    n_q_mod_p: int           # q + 1 - a_q mod p: #E(F_q) mod p
    splitting: str           # irreducible | split | repeated


@dataclass(frozen=True)
class FrobeniusTable:
    p: int
    bound: int
    rows: tuple


def frobenius_scan(E: CurveQ, p: int, bound: int) -> FrobeniusTable:
    if bound < 10:
        raise ValueError("bound must be at least 10")
    rows = []
    for q in range(2, bound + 1):
        if not is_prime(q) or q == p or not E.is_good(q):
            continue
        _, aq = count_points(E, q)
        disc = (aq * aq - 4 * q) % p
        if disc == 0:
            splitting = "repeated"
        elif pow(disc, (p - 1) // 2, p) == 1:
            splitting = "split"
        else:
            splitting = "irreducible"
        rows.append(FrobRow(q=q, a_q=aq, a_q_mod_p=aq % p,
                            n_q_mod_p=(q + 1 - aq) % p, splitting=splitting))
    return FrobeniusTable(p=p, bound=bound, rows=tuple(rows))


@dataclass(frozen=True)
class GaloisImageReport:
    p: int
    bound: int
    verdict: str             # irreducible_certified | reducible_shape_suspected | inconclusive
    witness_q: int | None
    shape: str | None
    unipotent_shape: bool    # every scanned trace is 2 mod p
    rows_scanned: int


def certify_irreducible(E: CurveQ, p: int, bound: int = 1000) -> GaloisImageReport:
    if p == 2:
        raise ValueError("p must be odd")
    table = frobenius_scan(E, p, bound)
    unipotent = all(r.a_q_mod_p == 2 % p for r in table.rows)
    for r in table.rows:
        if r.splitting == "irreducible":
            return GaloisImageReport(p=p, bound=bound,
                                     verdict="irreducible_certified",
                                     witness_q=r.q, shape=None,
                                     unipotent_shape=unipotent,
                                     rows_scanned=len(table.rows))
    if table.rows and all(r.n_q_mod_p == 0 for r in table.rows):
        return GaloisImageReport(p=p, bound=bound,
                                 verdict="reducible_shape_suspected",
                                 witness_q=None,
                                 shape="(1,*;0,chi) or (chi,*;0,1)",
                                 unipotent_shape=unipotent,
                                 rows_scanned=len(table.rows))
    return GaloisImageReport(p=p, bound=bound, verdict="inconclusive",
                             witness_q=None, shape=None,
                             unipotent_shape=unipotent,
                             rows_scanned=len(table.rows))


def irreducible_over_K(report: GaloisImageReport, F: QuadField, p: int):
    """Irreducibility over Q descends to K; flags the delicate cases.

    Returns {over_K, route, d_equals_p_star, absolute_irreducibility_caveat}.
    """
    if report.verdict != "irreducible_certified":
        raise PreconditionUnmet("needs an irreducibility certificate")
    p_star = p if p % 4 == 1 else -p
    d_is_pstar = (F.D == p_star)
    caveat = (p == 3 and F.D == -3)
    route = "5.26(2)" if d_is_pstar else "5.26(2) + 5.26(1)"
    return {
        "over_K": True,
        "route": route,
        "d_equals_p_star": d_is_pstar,
        "absolute_irreducibility_caveat": caveat,
    }


def h1_vanishing_conditions(F: QuadField, p: int,
                            report: GaloisImageReport) -> list:
    """Satisfied vanishing-condition tags; nonempty list certifies
    H^1(K(E[p^m1])/K, E[p^m2]) = 0 for all m1 >= m2 >= 1."""
    if report.verdict != "irreducible_certified":
        return []
    tags = []
    if p > 3:
        tags.append("(a'')")
    tags.append("(e')")
    return tags
