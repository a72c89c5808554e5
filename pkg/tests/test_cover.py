"""Cyclic covers: lifts, witness classes, spreading bounds, certificates."""

import math

import pytest

from twistcert.cover import (
    ALPHA_PATH,
    BETA_PATH,
    ETA_PATH,
    MODE_ARITHMETIC,
    MODE_HOMOLOGY,
    CoverCertificate,
    CoverSpec,
    DegreeTooSmall,
    InvalidDegree,
    LiftError,
    WitnessFailure,
    build_certificate,
    build_cover,
    construction_word,
    homology_basis,
    lift_curve,
    lifted_multitwist_matrix,
    non_torelli_witness,
    path_winding,
    spreading_bound,
)
from twistcert.symplectic import (
    SymplecticSpace,
    identity_matrix,
    is_level_trivial,
    is_symplectic,
    is_torelli,
    transvection_matrix,
)


def test_build_cover_shape():
    for n in (2, 3, 5, 8):
        cover = build_cover(n)
        assert cover.genus == n + 1
        assert cover.cells.euler_characteristic() == -2 * n
        assert len(cover.cells.vertices) == n
        assert len(cover.cells.edges) == 4 * n
        assert len(cover.cells.faces) == n
        assert cover.cells.is_connected()


def test_build_cover_rejects_degree_below_two():
    for n in (1, 0, -3):
        with pytest.raises(InvalidDegree):
            build_cover(n)
    with pytest.raises(InvalidDegree):
        CoverSpec(degree=1)


def test_cover_homology_rank():
    for n in (2, 3, 6):
        assert homology_basis(build_cover(n)).rank == 2 * (n + 1)


def test_deck_image_wraps():
    cover = build_cover(3)
    assert cover.deck_image("a2_0") == "a2_1"
    assert cover.deck_image("b2_2") == "b2_0"


def test_path_windings():
    assert path_winding(ALPHA_PATH) == 0
    assert path_winding(BETA_PATH) == 0
    assert path_winding(ETA_PATH) == -1


def test_beta_lift_is_torelli():
    for n in (2, 3, 5):
        cover = build_cover(n)
        homology = homology_basis(cover)
        lift = lift_curve("beta", BETA_PATH, cover, homology)
        assert lift.component_count == n
        assert all(v.is_zero() for v in lift.classes)
        matrix = lifted_multitwist_matrix(lift, homology)
        assert matrix == identity_matrix(homology.rank)
        assert is_torelli(matrix)


def test_alpha_lift_is_level_n():
    for n in (2, 3, 5):
        cover = build_cover(n)
        homology = homology_basis(cover)
        lift = lift_curve("alpha", ALPHA_PATH, cover, homology)
        assert lift.component_count == n
        first = lift.classes[0]
        assert not first.is_zero()
        assert all(v == first for v in lift.classes)
        matrix = lifted_multitwist_matrix(lift, homology)
        assert matrix == transvection_matrix(first, n, homology.space)
        assert is_level_trivial(matrix, n)
        assert not is_torelli(matrix)
        assert is_symplectic(matrix, homology.space)


def test_eta_lift_is_connected():
    for n in (2, 3, 5):
        cover = build_cover(n)
        homology = homology_basis(cover)
        lift = lift_curve("eta", ETA_PATH, cover, homology)
        assert lift.winding == -1
        assert lift.component_count == math.gcd(n, 1) == 1
        assert len(lift.components[0]) == n
        assert not lift.classes[0].is_zero()


def test_lift_rejects_foreign_letters():
    cover = build_cover(2)
    homology = homology_basis(cover)
    with pytest.raises(LiftError):
        lift_curve("x", (("zeta", 1),), cover, homology)
    with pytest.raises(LiftError):
        lift_curve("x", (("a1", 2),), cover, homology)


def test_witness_class():
    space = SymplecticSpace(2)
    for n in (2, 5, 577, 1152, 1153):
        witness = non_torelli_witness(n)
        assert witness == space.a(2).scaled(-n)
        assert not witness.is_zero()


def test_witness_failure_on_fixed_class():
    space = SymplecticSpace(2)
    with pytest.raises(WitnessFailure):
        non_torelli_witness(5, eta_class=space.zero())
    with pytest.raises(InvalidDegree):
        non_torelli_witness(1)


def test_construction_word_shape():
    word = construction_word()
    assert word.letters == (("beta", 1), ("phi_beta", -1), ("phi_alpha", -1))


def test_spreading_bound_values():
    b = spreading_bound(577)
    assert (b.m_max, b.bound_exact) == (1, 2.0)
    assert b.equality_case
    assert b.bound_paper == 1152.0

    b = spreading_bound(1152)
    assert (b.m_max, b.bound_exact) == (1, 2.0)
    assert not b.equality_case
    assert b.bound_paper == 2.0

    b = spreading_bound(1153)
    assert (b.m_max, b.bound_exact) == (2, 1.0)
    assert b.equality_case
    assert b.bound_paper == pytest.approx(1152.0 / 577.0)


def test_spreading_bound_rejects_small_degrees():
    for n in (2, 100, 575, 576):
        with pytest.raises(DegreeTooSmall):
            spreading_bound(n)
    with pytest.raises(ValueError):
        spreading_bound(1000, s=0)


def test_exact_bound_below_closed_form():
    for n in range(577, 4000, 7):
        b = spreading_bound(n)
        assert b.bound_exact <= b.bound_paper + 1e-12
        assert b.bound_paper == pytest.approx(1152.0 / (n - 576))
        assert b.m_max == (n - 1) // 576
        assert b.equality_case == (576 * b.m_max + 1 == n)


def test_certificate_arithmetic_mode():
    cert = build_certificate(1153, mode=MODE_ARITHMETIC)
    assert cert.degree == 1153
    assert cert.cover_genus == 1154
    assert cert.spreading == 576
    assert (cert.m_max, cert.bound_exact) == (2, 1.0)
    assert cert.witness == (0, 0, -1153, 0)
    statuses = {fact.paper_anchor: fact.status for fact in cert.facts}
    assert statuses["claim:lifted-beta-separating"] == "asserted"
    assert statuses["claim:lifted-alpha-level"] == "asserted"
    assert statuses["lemma:level-kernel-normal"] == "verified"
    assert statuses["claim:level-kernel-proper"] == "verified"
    assert statuses["claim:lift-non-torelli"] == "verified"
    assert statuses["remark:spreading-equality-case"] == "verified"


def test_certificate_equality_fact_only_when_exact():
    anchors = {f.paper_anchor for f in build_certificate(1152).facts}
    assert "remark:spreading-equality-case" not in anchors
    anchors = {f.paper_anchor for f in build_certificate(577).facts}
    assert "remark:spreading-equality-case" in anchors


def test_certificate_homology_mode():
    cert = build_certificate(6, mode=MODE_HOMOLOGY)
    assert cert.mode == MODE_HOMOLOGY
    assert cert.m_max is None
    assert all(fact.status == "verified" for fact in cert.facts)
    payload = cert.to_json_dict()
    assert "m_max" not in payload
    assert "bound_exact" not in payload
    assert any("spreading inequality unsatisfiable" in note for note in cert.notes)


def test_certificate_homology_cap():
    with pytest.raises(ValueError):
        build_certificate(100, mode=MODE_HOMOLOGY)
    with pytest.raises(ValueError):
        build_certificate(5, mode="bogus")
    with pytest.raises(DegreeTooSmall):
        build_certificate(100, mode=MODE_ARITHMETIC)
    with pytest.raises(InvalidDegree):
        build_certificate(1)


def test_certificate_json_round_trip():
    for cert in (build_certificate(1153), build_certificate(5, mode=MODE_HOMOLOGY)):
        back = CoverCertificate.from_json_dict(cert.to_json_dict())
        assert back == cert


def test_certificate_word_identity_names_both_preimage_twists():
    cert = build_certificate(577)
    assert cert.word_identity["target"] == "f_lift"
    assert set(cert.word_identity["symbols"]) == {"T_pb", "T_pa", "phi_lift"}


def test_certificate_genus_form_note():
    cert = build_certificate(577)
    assert any("2s/(h - 1 - s)" in note for note in cert.notes)
