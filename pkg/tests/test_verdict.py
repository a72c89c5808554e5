"""Rule engine: obstructions outrank positive rules, thresholds are non-strict."""

import dataclasses
import math

import pytest

from twistcert.cover import build_certificate
from twistcert.penner import METHOD_TRACE, StretchCertificate
from twistcert.symplectic import SymplecticSpace, TwistWord, identity_matrix, transvection_matrix
from twistcert.verdict import (
    CONTAINS_COMMUTATOR,
    INCONCLUSIVE,
    LENGTH_THRESHOLD,
    NORMAL_GENERATOR,
    NOT_NORMAL_GENERATOR,
    FiniteOrder,
    InconsistentProfile,
    MappingClassProfile,
    PartlyPA,
    Verdict,
    apply_rules,
    profile_for_cover,
)


def pa_cert(lam: float) -> StretchCertificate:
    return StretchCertificate(
        word=TwistWord.from_text("c d^-1"),
        lam=lam,
        l_teich=math.log(lam),
        matrix=((2, 1), (1, 1)),
        method=METHOD_TRACE,
        iterations=0,
        residual=0.0,
    )


def pa_profile(lam: float, genus: int = 3, closed: bool = True, punctures: int = 0):
    return MappingClassProfile(
        genus=genus,
        closed=closed,
        punctures=punctures,
        pa_certificate=pa_cert(lam),
    )


def test_threshold_boundary_is_accepted():
    verdict = apply_rules(pa_profile(math.sqrt(2.0)))
    assert verdict.decision == NORMAL_GENERATOR
    assert verdict.rule.startswith("LM-pA:")
    assert verdict.inputs_used == ("pa_certificate",)
    assert verdict.asserted_inputs == ()


def test_just_above_threshold_is_inconclusive():
    assert math.log(1.4143) > LENGTH_THRESHOLD
    verdict = apply_rules(pa_profile(1.4143))
    assert verdict.decision == INCONCLUSIVE
    assert verdict.rule == ""
    assert verdict.anchors == ()


def test_short_pa_below_genus_three_gives_commutator():
    verdict = apply_rules(pa_profile(1.30, genus=2))
    assert verdict.decision == CONTAINS_COMMUTATOR
    assert "rule:short-pseudo-anosov-commutator" in verdict.anchors


def test_short_pa_with_punctures_gives_commutator():
    verdict = apply_rules(pa_profile(1.30, genus=5, closed=False, punctures=2))
    assert verdict.decision == CONTAINS_COMMUTATOR


def test_torelli_obstruction_outranks_short_pa():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        pa_certificate=pa_cert(1.2),
        torelli=True,
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert verdict.rule.startswith("OBS-Torelli:")
    assert verdict.inputs_used == ("torelli",)
    assert "torelli" in verdict.asserted_inputs


def test_verified_torelli_from_matrix():
    g = 2
    profile = MappingClassProfile(
        genus=g,
        closed=True,
        homology_matrix=identity_matrix(2 * g),
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert verdict.inputs_used == ("homology_matrix",)
    assert verdict.asserted_inputs == ()


def test_level_obstruction_with_verified_matrix():
    space = SymplecticSpace(2)
    matrix = transvection_matrix(space.a(1), 5, space)
    profile = MappingClassProfile(
        genus=2,
        closed=True,
        homology_matrix=matrix,
        level_trivial_moduli=(5,),
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert verdict.rule.startswith("OBS-level:")
    assert "mod 5" in verdict.rule
    assert verdict.asserted_inputs == ()


def test_level_obstruction_outranks_short_pa():
    profile = MappingClassProfile(
        genus=4,
        closed=True,
        pa_certificate=pa_cert(1.1),
        level_trivial_moduli=(3,),
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert verdict.rule.startswith("OBS-level:")
    assert verdict.asserted_inputs == ("level_trivial_moduli",)


def test_modulus_one_is_ignored():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        level_trivial_moduli=(1,),
    )
    assert apply_rules(profile).decision == INCONCLUSIVE


def test_invariant_subsurface_strong_rule():
    profile = MappingClassProfile(
        genus=5,
        closed=True,
        partly_pa=PartlyPA(
            subsurface_genus=3, invariant=True, restriction_pa=True, l_teich=0.3
        ),
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NORMAL_GENERATOR
    assert verdict.rule.startswith("BKW:")
    assert verdict.anchors == ("rule:invariant-subsurface-generates",)
    assert verdict.asserted_inputs == ("partly_pa",)


def test_weak_subsurface_rule_is_opt_in():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        partly_pa=PartlyPA(
            subsurface_genus=1, invariant=True, restriction_pa=True, l_teich=0.3
        ),
    )
    assert apply_rules(profile).decision == INCONCLUSIVE
    verdict = apply_rules(profile, allow_weak_partly_pa=True)
    assert verdict.decision == NORMAL_GENERATOR
    assert verdict.rule.startswith("BKW-weak:")
    assert verdict.anchors == ("rule:invariant-subsurface-generates-weak",)


def test_weak_rule_still_needs_ambient_genus_three():
    profile = MappingClassProfile(
        genus=2,
        closed=True,
        partly_pa=PartlyPA(
            subsurface_genus=1, invariant=True, restriction_pa=True, l_teich=0.3
        ),
    )
    assert apply_rules(profile, allow_weak_partly_pa=True).decision == INCONCLUSIVE


def test_subsurface_rule_requires_all_flags():
    for kwargs in (
        {"invariant": False, "restriction_pa": True, "l_teich": 0.3},
        {"invariant": True, "restriction_pa": False, "l_teich": 0.3},
        {"invariant": True, "restriction_pa": True, "l_teich": 0.5},
    ):
        profile = MappingClassProfile(
            genus=5,
            closed=True,
            partly_pa=PartlyPA(subsurface_genus=3, **kwargs),
        )
        assert apply_rules(profile).decision == INCONCLUSIVE
    punctured = MappingClassProfile(
        genus=5,
        closed=False,
        punctures=1,
        partly_pa=PartlyPA(
            subsurface_genus=3, invariant=True, restriction_pa=True, l_teich=0.3
        ),
    )
    assert apply_rules(punctured).decision == INCONCLUSIVE


def test_finite_order_rule():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        finite_order=FiniteOrder(order=5, is_hyperelliptic_involution=False),
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NORMAL_GENERATOR
    assert verdict.rule.startswith("LM-finite:")
    assert verdict.asserted_inputs == ("finite_order",)


def test_hyperelliptic_involution_is_excluded():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        finite_order=FiniteOrder(order=2, is_hyperelliptic_involution=True),
    )
    assert apply_rules(profile).decision == INCONCLUSIVE


def test_finite_order_needs_genus_three():
    profile = MappingClassProfile(
        genus=2,
        closed=True,
        finite_order=FiniteOrder(order=6, is_hyperelliptic_involution=False),
    )
    assert apply_rules(profile).decision == INCONCLUSIVE


def test_torelli_outranks_finite_order():
    profile = MappingClassProfile(
        genus=3,
        closed=True,
        finite_order=FiniteOrder(order=7, is_hyperelliptic_involution=False),
        torelli=True,
    )
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert set(verdict.asserted_inputs) == {"finite_order", "torelli"}


def test_profile_validation():
    with pytest.raises(ValueError):
        MappingClassProfile(genus=1, closed=True)
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(genus=2, closed=True, punctures=2)
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(genus=2, closed=False, punctures=0)
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(
            genus=2,
            closed=True,
            pa_certificate=pa_cert(1.5),
            finite_order=FiniteOrder(order=2, is_hyperelliptic_involution=False),
        )
    with pytest.raises(ValueError):
        MappingClassProfile(genus=3, closed=True, homology_matrix=identity_matrix(4))


def test_profile_matrix_consistency():
    space = SymplecticSpace(2)
    shear = transvection_matrix(space.a(1), 1, space)
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(genus=2, closed=True, homology_matrix=shear, torelli=True)
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(
            genus=2, closed=True, homology_matrix=identity_matrix(4), torelli=False
        )
    with pytest.raises(InconsistentProfile):
        MappingClassProfile(
            genus=2, closed=True, homology_matrix=shear, level_trivial_moduli=(5,)
        )


def test_torelli_status_precedence():
    space = SymplecticSpace(2)
    shear = transvection_matrix(space.a(1), 1, space)
    assert MappingClassProfile(
        genus=2, closed=True, homology_matrix=identity_matrix(4)
    ).torelli_status() == (True, True)
    assert MappingClassProfile(
        genus=2, closed=True, homology_matrix=shear
    ).torelli_status() == (False, True)
    assert MappingClassProfile(genus=2, closed=True, torelli=True).torelli_status() == (
        True,
        False,
    )
    assert MappingClassProfile(genus=2, closed=True).torelli_status() == (False, False)


def test_profile_json_round_trip():
    profiles = (
        pa_profile(1.25),
        MappingClassProfile(
            genus=4,
            closed=True,
            partly_pa=PartlyPA(
                subsurface_genus=3, invariant=True, restriction_pa=True, l_teich=0.2
            ),
            torelli=False,
            level_trivial_moduli=(7, 11),
        ),
        MappingClassProfile(
            genus=3,
            closed=False,
            punctures=1,
            finite_order=FiniteOrder(order=4, is_hyperelliptic_involution=False),
        ),
    )
    for profile in profiles:
        assert MappingClassProfile.from_json_dict(profile.to_json_dict()) == profile


def test_verdict_json_round_trip():
    verdict = apply_rules(pa_profile(1.3))
    assert Verdict.from_json_dict(verdict.to_json_dict()) == verdict


def test_decisive_verdict_requires_rule():
    with pytest.raises(ValueError):
        Verdict(
            decision=NORMAL_GENERATOR,
            rule="",
            anchors=(),
            inputs_used=(),
            asserted_inputs=(),
        )


def test_profile_for_cover_routes_to_level_rule():
    cert = build_certificate(1153)
    profile = profile_for_cover(cert)
    assert profile.genus == 1154
    assert profile.level_trivial_moduli == (1153,)
    verdict = apply_rules(profile)
    assert verdict.decision == NOT_NORMAL_GENERATOR
    assert verdict.rule.startswith("OBS-level:")


def test_profile_for_cover_rejects_zero_witness():
    cert = dataclasses.replace(build_certificate(1153), witness=(0, 0, 0, 0))
    with pytest.raises(InconsistentProfile):
        profile_for_cover(cert)
