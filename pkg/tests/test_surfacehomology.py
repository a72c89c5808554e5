"""Chain-level H_1 with intersection form, on hand-built complexes."""

import pytest

from twistcert.cover import build_cover
from twistcert.surfacehomology import (
    CellComplex,
    HomologyRankError,
    SurfaceHomology,
    smith_invariant_factors,
)
from twistcert.symplectic import H1Vector, intersection_pairing


def torus_complex() -> CellComplex:
    return CellComplex(
        vertices=("v",),
        edges={"a": ("v", "v"), "b": ("v", "v")},
        faces=(((("a", 1)), ("b", 1), ("a", -1), ("b", -1)),),
    )


def octagon_complex() -> CellComplex:
    word = (
        ("a1", 1), ("b1", 1), ("a1", -1), ("b1", -1),
        ("a2", 1), ("b2", 1), ("a2", -1), ("b2", -1),
    )
    return CellComplex(
        vertices=("v",),
        edges={e: ("v", "v") for e in ("a1", "b1", "a2", "b2")},
        faces=(word,),
    )


def test_torus_rank_and_pairing():
    homology = SurfaceHomology(torus_complex())
    assert homology.rank == 2
    a = homology.class_of_cycle({"a": 1})
    b = homology.class_of_cycle({"b": 1})
    assert intersection_pairing(a, b, homology.space) == 1
    assert intersection_pairing(a, a, homology.space) == 0


def test_octagon_pairing_matrix_is_standard():
    homology = SurfaceHomology(octagon_complex())
    assert homology.rank == 4
    classes = [homology.class_of_cycle({e: 1}) for e in ("a1", "b1", "a2", "b2")]
    j = homology.space.pairing_matrix
    for i, v in enumerate(classes):
        for k, w in enumerate(classes):
            assert intersection_pairing(v, w, homology.space) == j[i][k]


def test_octagon_classes_span():
    homology = SurfaceHomology(octagon_complex())
    classes = [homology.class_of_cycle({e: 1}) for e in ("a1", "b1", "a2", "b2")]
    seen = {v.coords for v in classes}
    assert len(seen) == 4
    total = classes[0]
    for v in classes[1:]:
        total = total + v
    combined = homology.class_of_cycle({"a1": 1, "b1": 1, "a2": 1, "b2": 1})
    assert combined == total


def test_basis_cycles_hit_unit_vectors():
    for homology in (
        SurfaceHomology(octagon_complex()),
        SurfaceHomology(build_cover(3).cells),
    ):
        for i in range(homology.rank):
            unit = H1Vector(tuple(1 if j == i else 0 for j in range(homology.rank)))
            assert homology.class_of_cycle(homology.basis_cycle(i)) == unit


def test_polygon_form_is_skew():
    homology = SurfaceHomology(build_cover(2).cells)
    form = homology.polygon_form
    for i, row in enumerate(form):
        for j, value in enumerate(row):
            assert value == -form[j][i]
    assert homology.rank == 6


def test_boundary_of_face_is_null_homologous():
    homology = SurfaceHomology(octagon_complex())
    assert homology.class_of_cycle({}).is_zero()
    # the relator itself cancels edge by edge, so its chain is empty
    chain = {"a1": 0, "b1": 0}
    assert homology.class_of_cycle(chain).is_zero()


def test_sphere_rank_is_rejected():
    sphere = CellComplex(
        vertices=("u", "w"),
        edges={"e1": ("u", "w"), "e2": ("u", "w")},
        faces=(
            (("e1", 1), ("e2", -1)),
            (("e2", 1), ("e1", -1)),
        ),
    )
    with pytest.raises(HomologyRankError):
        SurfaceHomology(sphere)


def test_disconnected_complex_is_rejected():
    relator = lambda a, b: ((a, 1), (b, 1), (a, -1), (b, -1))
    two_tori = CellComplex(
        vertices=("u", "w"),
        edges={
            "a1": ("u", "u"), "b1": ("u", "u"),
            "a2": ("w", "w"), "b2": ("w", "w"),
        },
        faces=(relator("a1", "b1"), relator("a2", "b2")),
    )
    assert not two_tori.is_connected()
    with pytest.raises(ValueError):
        SurfaceHomology(two_tori)


def test_cycle_validation():
    homology = SurfaceHomology(build_cover(2).cells)
    with pytest.raises(ValueError):
        homology.class_of_cycle({"nope": 1})
    # b2_0 runs between distinct sheets, so alone it is not a cycle
    with pytest.raises(ValueError):
        homology.class_of_cycle({"b2_0": 1})
    assert homology.class_of_cycle({"b2_0": 1, "b2_1": 1}) is not None


def test_complex_validation_errors():
    with pytest.raises(ValueError):
        CellComplex(vertices=("v", "v"), edges={}, faces=())
    with pytest.raises(ValueError):
        CellComplex(vertices=("v",), edges={"e": ("v", "ghost")}, faces=())
    with pytest.raises(ValueError):
        CellComplex(
            vertices=("v",),
            edges={"a": ("v", "v")},
            faces=((("ghost", 1), ("a", -1)),),
        )
    with pytest.raises(ValueError):
        CellComplex(
            vertices=("v",),
            edges={"a": ("v", "v")},
            faces=((("a", 2), ("a", -1)),),
        )
    # edge must be used exactly once with each sign
    with pytest.raises(ValueError):
        CellComplex(
            vertices=("v",),
            edges={"a": ("v", "v"), "b": ("v", "v")},
            faces=((("a", 1), ("a", 1), ("b", 1), ("b", -1)),),
        )


def test_face_words_must_compose_and_close():
    edges = {"e1": ("u", "w"), "e2": ("u", "w"), "e3": ("u", "w")}
    with pytest.raises(ValueError):
        CellComplex(
            vertices=("u", "w"),
            edges=edges,
            faces=(
                (("e1", 1), ("e2", 1), ("e3", 1)),  # e2 cannot start at w
                (("e1", -1), ("e2", -1), ("e3", -1)),
            ),
        )


def test_euler_characteristic():
    assert torus_complex().euler_characteristic() == 0
    assert octagon_complex().euler_characteristic() == -2
    assert build_cover(5).cells.euler_characteristic() == -10


def test_smith_invariant_factors():
    assert smith_invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert smith_invariant_factors([[4, 6], [2, 2]]) == [2, 2]
    assert smith_invariant_factors([[1, 2], [2, 4]]) == [1]
    assert smith_invariant_factors([[0, 0], [0, 0]]) == []
    assert smith_invariant_factors([[1, 0], [0, 1]]) == [1, 1]
    assert smith_invariant_factors([[6]]) == [6]
