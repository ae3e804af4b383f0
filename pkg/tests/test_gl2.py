"""GL2(F_q) machinery: closure, classification, exceptional tables."""

import itertools

import pytest

from heegnercert.finitefield import build_field
from heegnercert.gl2 import (CartanSubgroup, ClassifyReport, OrderMismatch,
                             all_subgroups, classify_subgroup,
                             element_of_multiplicative_order, element_order,
                             group_closure, irreducible_no_homothety_classes,
                             k_exceptional, list_k_exceptional, make_I_psi,
                             make_J_psi_prime, mat_det, mat_identity, mat_inv,
                             mat_mul, norm_one_element_of_order,
                             smallest_nonsquare)


def _gl2_elements(F):
    return [g for g in itertools.product(F.elements(), repeat=4)
            if mat_det(F, g) != F.zero]


def test_closure_is_a_group():
    F = build_field(5, 1)
    gens = [(F.from_int(2), F.zero, F.zero, F.from_int(3)),
            (F.zero, F.one, F.one, F.zero)]
    els = group_closure(F, gens)
    ident = mat_identity(F)
    assert ident in els
    s = set(els)
    for a in els:
        assert mat_mul(F, a, mat_inv(F, a)) == ident
        for b in gens:
            assert mat_mul(F, a, b) in s


def test_element_order_matches_brute():
    F = build_field(7, 1)
    for g in _gl2_elements(F)[:80]:
        n = element_order(F, g)
        acc = g
        for _ in range(n - 1):
            assert acc != mat_identity(F)
            acc = mat_mul(F, acc, g)
        assert acc == mat_identity(F)


def test_k_exceptional_validation():
    with pytest.raises(ValueError):
        k_exceptional(4, 5, 1)
    with pytest.raises(ValueError):
        k_exceptional(1, 5, 1)
    flag, witness = k_exceptional(3, 5, 1)
    assert flag and witness["branch"] == "divides q+1"
    flag, witness = k_exceptional(3, 7, 1)
    assert flag and witness["branch"] == "divides q-1"


def test_k_exceptional_f1_table():
    assert list_k_exceptional(3, 1, 60) == []
    assert list_k_exceptional(5, 1, 60) == [3]
    assert list_k_exceptional(47, 1, 60) == [3]


def test_cartan_subgroup_orders():
    F = build_field(7, 1)
    split = CartanSubgroup("split").elements(F)
    assert len(split) == (7 - 1) ** 2
    ns = CartanSubgroup("nonsplit", smallest_nonsquare(F)).elements(F)
    assert len(ns) == 7 * 7 - 1


def test_dihedral_constructors():
    F = build_field(11, 1)
    t = element_of_multiplicative_order(F, 5)
    rep = make_I_psi(F, 5, t)
    els = rep.elements()
    assert len(els) == 10
    with pytest.raises(OrderMismatch):
        make_I_psi(F, 7, t)
    ab = norm_one_element_of_order(F, 3)
    repj = make_J_psi_prime(F, 3, ab)
    assert len(repj.elements()) == 6
    with pytest.raises(OrderMismatch):
        norm_one_element_of_order(F, 5)


def test_classify_buckets():
    F = build_field(7, 1)
    # Borel upper-triangular: reducible with a stable line
    rep = classify_subgroup(F, [(F.from_int(2), F.one, F.zero, F.from_int(3))])
    assert not rep.irreducible and rep.stable_line is not None
    # scalars only
    rep = classify_subgroup(F, [(F.from_int(3), F.zero, F.zero, F.from_int(3))])
    assert not rep.irreducible
    assert rep.has_nontrivial_homothety
    # full GL2 via two standard generators: irreducible, has homothety
    g1 = (F.from_int(3), F.zero, F.zero, F.one)           # 3 generates F_7^*
    g2 = (F.neg(F.one), F.one, F.neg(F.one), F.zero)
    rep = classify_subgroup(F, [g1, g2])
    assert rep.irreducible and rep.has_nontrivial_homothety
    assert rep.order == (7 ** 2 - 1) * (7 ** 2 - 7)
    # nonsplit Cartan cyclic part: irreducible, inside a Cartan
    ab = norm_one_element_of_order(F, 4)
    d = smallest_nonsquare(F)
    from heegnercert.gl2 import cartan_embed
    rep = classify_subgroup(F, [cartan_embed(F, d, ab[0], ab[1])])
    assert rep.irreducible and rep.inside_cartan


def test_class_enumeration_small_primes():
    for p, expect in ((3, []), (5, [("nonsplit", 3, False), ("nonsplit", 3, True)]),
                      (7, [("split", 3, False)]),
                      (11, [("nonsplit", 3, False), ("nonsplit", 3, True),
                            ("split", 5, False)])):
        F = build_field(p, 1)
        got = [(r.kind, r.n, r.invol is None)
               for r in irreducible_no_homothety_classes(F)]
        assert got == expect, (p, got)


def test_all_subgroups_of_s3_model():
    # the split dihedral I(3) in GL2(F_7) is S3: it has 6 subgroups
    F = build_field(7, 1)
    t = element_of_multiplicative_order(F, 3)
    els = make_I_psi(F, 3, t).elements()
    subs = all_subgroups(F, els)
    assert [len(s) for s in subs] == [1, 2, 2, 2, 3, 6]


def test_classify_f2():
    # GL2(F_9): a nonsplit-Cartan cyclic subgroup of order 5 | 9 + 1... use
    # norm-one element; exercises the f = 2 code path end to end
    F = build_field(3, 2)
    ab = norm_one_element_of_order(F, 5)
    d = smallest_nonsquare(F)
    from heegnercert.gl2 import cartan_embed
    rep = classify_subgroup(F, [cartan_embed(F, d, ab[0], ab[1])])
    assert rep.irreducible and rep.order == 5
    assert not rep.has_nontrivial_homothety
