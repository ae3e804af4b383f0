"""Heegner point construction, reconstruction, and divisibility evidence."""

import pytest

from heegnercert.elliptic import CurveQ
from heegnercert.heegner import (heegner_trace, norm_relation_check,
                                 nontorsion_certificate, p_divisibility_test,
                                 result_from_log, universal_norm_unit,
                                 z_K_construction)
from heegnercert.kpoints import ec_mul, kelem
from heegnercert.quadfield import build_field

E37 = CurveQ(0, 0, 1, -1, 0)


@pytest.fixture(scope="module")
def y37():
    return heegner_trace(E37, build_field(-7), 1, 60)


def test_trace_point_exact_on_curve_over_K(y37):
    assert y37.point is not None
    assert y37.residual_digits > 30
    assert y37.conj_consistent
    # the trace is an integer multiple of the generator (0, 0)
    G = (kelem(-7, 0), kelem(-7, 0))
    hits = [n for n in range(-8, 9)
            if n and ec_mul(E37, n, G, -7) == y37.point]
    assert len(hits) == 1


def test_nontorsion_certificate(y37):
    nt = nontorsion_certificate(E37, build_field(-7), y37.point)
    assert nt["nontorsion"]


def test_log_round_trip_and_divisibility(y37):
    r5 = result_from_log(E37, build_field(-7), y37.z.mul_int(5), 60,
                         lat=y37.lat)
    assert r5.point == ec_mul(E37, 5, y37.point, -7)
    rep = p_divisibility_test(r5, 5)
    assert rep.divisible and rep.exact and rep.witness == y37.point
    rep0 = p_divisibility_test(y37, 5)
    assert not rep0.divisible and rep0.status == "numeric-negative"


def test_norm_relations_two_smallest_admissible(y37):
    F = build_field(-7)
    for q, coeff in ((2, -4), (3, -3)):
        nr = norm_relation_check(E37, F, q, 60, y1=y37)
        assert nr.passed and nr.exact_match
        assert nr.coeff == coeff            # a_q - 1 - eta(q)
        assert nr.residual_digits > 30


def test_norm_relation_rejects_inadmissible_prime(y37):
    with pytest.raises(ValueError):
        norm_relation_check(E37, build_field(-7), 37, 60, y1=y37)
    with pytest.raises(ValueError):
        norm_relation_check(E37, build_field(-7), 7, 60, y1=y37)


def test_universal_norm_unit():
    un = universal_norm_unit(E37, build_field(-7), 5)
    assert un["unit"] and un["congruence_ok"]
    # left side: product of #E over residue fields above p; p split here
    assert un["eta_p"] == -1


def test_z_K_construction_43a():
    E43 = CurveQ(0, 1, 1, 0, 0)
    F3 = build_field(-3)
    y43 = heegner_trace(E43, F3, 1, 60)
    zk = z_K_construction(E43, F3, 60, y1=y43)
    assert zk["in_3E"] and zk["checks"]["three_z_is_yK"]
    assert ec_mul(E43, 3, zk["point"], -3) == y43.point


def test_summary_shapes(y37):
    s = y37.summary()
    assert s["residual_digits"] > 30
    rep = p_divisibility_test(y37, 5)
    d = rep.summary()
    assert d["status"] == "numeric-negative" and d["p"] == 5
