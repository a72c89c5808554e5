"""Intersection bookkeeping and the twist-image derivation rules."""

import pytest

from twistcert.ledger import (
    PROV_ASSERTED,
    PROV_DERIVED,
    DuplicateCurve,
    InconsistentLedger,
    IntersectionLedger,
    UnknownCurveClass,
    UnknownIntersection,
    base_construction,
    derive_reference_table,
)
from twistcert.symplectic import SymplecticSpace, UnknownCurve


def test_reference_table_values():
    table = derive_reference_table()
    assert table == {
        "i(lam,beta)": 36,
        "i(lam,alpha)": 12,
        "i(phi_alpha,alpha)": 144,
        "i(phi_beta,alpha)": 432,
    }


def test_derivation_square_rule():
    # i(T_c^n x, x) = |n| * i(c, x)^2
    space = SymplecticSpace(2)
    ledger = IntersectionLedger(space)
    ledger.register_curve("c", space.a(1))
    ledger.register_curve("x", space.b(1))
    ledger.set_geometric("c", "x", 3)
    new_id = ledger.derive_twist_image("c", -2, "x").id
    assert new_id == "T_c^-2(x)"
    assert ledger.geometric_known(new_id, "x") == 2 * 9
    assert ledger.geometric_known(new_id, "c") == 3


def test_derivation_product_rule_and_provenance():
    ledger = base_construction()
    ledger.derive_twist_image("xi", 1, "beta", new_id="lam")
    assert ledger.geometric_known("lam", "alpha") == 12
    payload = ledger.to_json_dict()
    tags = {tuple(e["pair"]): e["provenance"] for e in payload["entries"]}
    assert tags[("beta", "xi")] == PROV_ASSERTED
    assert tags[("beta", "lam")] == PROV_DERIVED
    assert tags[("alpha", "lam")] == PROV_DERIVED


def test_cross_check_consistency_on_rederivation():
    # deriving the same image twice must agree, not duplicate or conflict
    ledger = base_construction()
    ledger.derive_twist_image("xi", 1, "beta", new_id="lam")
    ledger.derive_twist_image("lam", 1, "alpha", new_id="phi_alpha")
    again = IntersectionLedger.from_json_dict(ledger.to_json_dict())
    assert again.geometric_known("phi_alpha", "alpha") == 144


def test_conflicting_assertion_raises():
    ledger = base_construction()
    ledger.set_geometric("xi", "beta", 6)  # re-asserting the same value is fine
    with pytest.raises(InconsistentLedger):
        ledger.set_geometric("xi", "beta", 7)


def test_unknown_intersection_vs_implicit_zero():
    ledger = base_construction()
    assert ledger.geometric("xi", "eta") is None
    assert ledger.geometric("alpha", "alpha") == 0
    with pytest.raises(UnknownIntersection):
        ledger.geometric_known("xi", "eta")


def test_duplicate_curve_rejected():
    ledger = base_construction()
    with pytest.raises(DuplicateCurve):
        ledger.register_curve("alpha", None)


def test_unknown_curve_rejected():
    ledger = base_construction()
    with pytest.raises(UnknownCurve):
        ledger.set_geometric("alpha", "ghost", 1)


def test_twist_image_of_unclassed_curve_needs_class():
    # [xi] is unset; the image of a curve with nonzero class through T_xi
    # cannot be classified
    ledger = base_construction()
    with pytest.raises(UnknownCurveClass):
        ledger.derive_twist_image("xi", 1, "alpha")


def test_twist_image_of_null_class_skips_twisting_class():
    # [beta] = 0, so [T_xi beta] = [beta] even though [xi] is unknown
    ledger = base_construction()
    ledger.derive_twist_image("xi", 1, "beta", new_id="lam")
    assert ledger.curve("lam").h1_class.is_zero()
    assert ledger.curve("lam").separating is True


def test_bounding_pair_detection():
    space = SymplecticSpace(2)
    ledger = IntersectionLedger(space)
    ledger.register_curve("x", space.a(1))
    ledger.register_curve("y", space.a(1))
    ledger.register_curve("z", space.b(1))
    ledger.register_curve("sep", space.zero())
    ledger.set_geometric("x", "y", 0)
    ledger.set_geometric("x", "z", 0)
    ledger.set_geometric("x", "sep", 0)
    assert ledger.is_bounding_pair("x", "y")
    assert not ledger.is_bounding_pair("x", "z")  # classes differ
    assert not ledger.is_bounding_pair("x", "sep")  # separating partner


def test_curve_sequence_report():
    space = SymplecticSpace(2)
    ledger = IntersectionLedger(space)
    ledger.register_curve("u", space.a(1))
    ledger.register_curve("v", space.b(2))
    ledger.register_curve("w", space.a(2))
    ledger.set_geometric("u", "v", 0)
    ledger.set_geometric("v", "w", 0)
    report = ledger.check_curve_sequence(["u", "v", "w"], endpoints=("u", "w"))
    assert report.passed
    assert all(step.ok for step in report.steps)

    bad = ledger.check_curve_sequence(["u", "v"], endpoints=("u", "w"))
    assert not bad.passed


def test_json_round_trip():
    ledger = base_construction()
    derive_reference_table(ledger)
    payload = ledger.to_json_dict()
    back = IntersectionLedger.from_json_dict(payload)
    assert back.to_json_dict() == payload


def test_frozen_ledger_rejects_mutation():
    ledger = base_construction()
    ledger.freeze()
    with pytest.raises(RuntimeError):
        ledger.set_geometric("xi", "beta", 6)
    derived = ledger.with_derived("xi", 1, "beta", new_id="lam")
    assert derived.frozen
    assert derived.geometric_known("lam", "beta") == 36
    with pytest.raises(UnknownCurve):
        ledger.geometric_known("lam", "beta")
