"""Imaginary quadratic fields: forms, class numbers, Heegner data, genus theory."""

import pytest

from heegnercert.quadfield import (NotFundamental, QuadField, build_field,
                                   class_number, genus_decomposition,
                                   heegner_condition, heegner_forms,
                                   is_fundamental, is_reduced, pic_order,
                                   reduce_form, reduced_forms,
                                   ring_class_degrees, unit_half_count)

KNOWN_H = {-3: 1, -4: 1, -7: 1, -8: 1, -11: 1, -15: 2, -19: 1, -20: 2,
           -23: 3, -24: 2, -35: 2, -39: 4, -40: 2, -43: 1, -47: 5,
           -67: 1, -71: 7, -84: 4, -163: 1, -191: 13}


def test_fundamental_discriminants():
    fund = [D for D in range(-30, 0) if is_fundamental(D)]
    assert fund == [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]
    assert not is_fundamental(-9)       # -9 = 3^2 * (-1), not squarefree odd
    assert not is_fundamental(-12)      # 4 * (-3)
    assert not is_fundamental(5)        # positive


def test_class_numbers_known_table():
    for D, h in KNOWN_H.items():
        assert class_number(D) == h, D


def test_reduce_form_lands_reduced_and_preserves_disc():
    for (a, b, c) in ((7, 25, 23), (12, -34, 25), (3, 5, 3), (1, 1, 1)):
        ra, rb, rc = reduce_form(a, b, c)
        assert is_reduced(ra, rb, rc)
        assert rb * rb - 4 * ra * rc == b * b - 4 * a * c


def test_reduced_forms_minus_23():
    assert reduced_forms(-23) == ((1, 1, 6), (2, -1, 3), (2, 1, 3))


def test_unit_half_count():
    assert unit_half_count(-3) == 3
    assert unit_half_count(-4) == 2
    assert unit_half_count(-7) == 1


def test_build_field_validates():
    F = build_field(-7)
    assert (F.D, F.h, F.u_K) == (-7, 1, 1)
    assert F.principal_form() == (1, 1, 2)
    assert F.eta(2) == 1 and F.eta(3) == -1 and F.eta(7) == 0
    with pytest.raises(NotFundamental):
        build_field(-12)


def test_heegner_condition():
    F7 = build_field(-7)
    ok, etas = heegner_condition(37, F7)
    assert ok and etas == {37: 1}
    ok17, etas17 = heegner_condition(17, F7)
    assert not ok17 and etas17[17] == -1
    # ramified level prime also fails
    assert not heegner_condition(7, F7)[0]


def test_heegner_forms_bijection_with_classes():
    F = build_field(-71)                    # h = 7
    hs = heegner_forms(F, 37)
    assert len(hs.forms) == 7
    assert sorted(hs.reduced_classes) == sorted(reduced_forms(-71))
    assert len(set(hs.reduced_classes)) == 7
    for (a, b, c) in hs.forms:
        assert b * b - 4 * a * c == -71
        assert a % 37 == 0
        assert (b - hs.beta) % (2 * 37) == 0


def test_heegner_forms_nonmaximal_order():
    F = build_field(-7)
    hs = heegner_forms(F, 37, conductor=5)
    assert hs.disc == -175 and hs.conductor == 5
    assert len(hs.forms) == pic_order(F, 5) == 2 * 3    # (5 - eta(5)) h / u
    taus = hs.tau_points()
    assert len(taus) == len(hs.forms)
    assert all(a % 37 == 0 for a, _ in taus)


def test_pic_order_formula_against_forms():
    # #Pic(O_c) via forms of discriminant c^2 D matches the analytic formula
    for D, c in ((-7, 2), (-7, 3), (-8, 3), (-11, 2), (-3, 5)):
        F = build_field(D)
        forms = reduced_forms(c * c * D)
        assert len(forms) == pic_order(F, c), (D, c)


def test_genus_decomposition():
    g = genus_decomposition(build_field(-84))        # -84 = (-3)(-4)(-7)... no
    assert g.ramified == (2, 3, 7)
    prod = 1
    for v in g.factors.values():
        prod *= v
    assert prod == -84
    assert g.factors[3] == -3 and g.factors[7] == -7 and g.factors[2] == -4
    g2 = genus_decomposition(build_field(-15))
    assert g2.factors == {3: -3, 5: 5}


def test_ring_class_degrees():
    F = build_field(-7)
    r = ring_class_degrees(F, 5)
    assert (r.eta_p, r.deg_H1_over_K, r.deg_Hp_over_H1) == (-1, 1, 6)
    assert r.pic_order(0) == 1 and r.pic_order(1) == 6 and r.pic_order(2) == 30
    r3 = ring_class_degrees(build_field(-3), 3)
    assert r3.eta_p == 0 and r3.deg_Hp_over_H1 == 1   # (3 - 0)/3 = 1
    assert r3.pic_order(1) == 1 and r3.pic_order(2) == 3
