from fractions import Fraction

import pytest

from conftest import FIXTURES
from tropical_rubber.complexes import validate_subdivision
from tropical_rubber.document import ValidationError, load_input
from tropical_rubber.expansion import (
    NOT_INTEGRAL,
    NOT_SATURATED_OVER_BASE,
    MissingOneComplex,
    PointOutsideBase,
    asymptotic_complex,
    combinatorial_type,
    extend_base,
    fibre,
    fibre_type,
    is_bivalent,
    sample_points,
    tube_vertices,
    validate_expansion,
)
from tropical_rubber.rubber import position_map


def test_rank_one_fibre_is_a_chain(corpus):
    E = corpus["rank_one"].expansion
    F = fibre(E, (1, 1))
    assert F.positions == {"v0": (0,), "v1": (1,), "v2": (2,)}
    assert F.polyhedra["P01"].length == 1 and F.polyhedra["P12"].length == 1
    assert F.polyhedra["R2"].recession == ((1,),) and F.polyhedra["R2"].length is None


def test_fibre_over_rational_point(corpus):
    E = corpus["introduction"].expansion
    F = fibre(E, (Fraction(1, 2), Fraction(1, 3)))
    assert F.positions["v3"] == (Fraction(1, 2), Fraction(5, 6))
    assert F.polyhedra["P23"].length == Fraction(1, 3)


def test_fibre_outside_base_is_rejected(corpus):
    E = corpus["introduction"].expansion
    with pytest.raises(PointOutsideBase):
        fibre(E, (-1, 0))
    with pytest.raises(PointOutsideBase):
        fibre(E, (1,))


def test_fibre_over_a_boundary_face_collapses_edges(corpus):
    E = corpus["introduction"].expansion
    F = fibre(E, (0, 1))
    # over e1 = 0 the vertices v0 and v2 coincide, so P02 is not a cell
    assert "P02" not in F.polyhedra
    assert F.base_face.dim == 1


def test_introduction_is_complete_and_valid(corpus):
    report = validate_expansion(corpus["introduction"].expansion)
    assert report.is_valid and report.is_complete
    assert set(report.cone_verdicts.values()) == {"ok"}


def test_asymptotic_complex_subdivides_sigma(corpus, random_expansions):
    for E in [m.expansion for m in corpus.values()] + random_expansions[:40]:
        if not validate_expansion(E).is_complete:
            continue  # only a complete expansion covers sigma over the origin
        asym = asymptotic_complex(E)
        report = validate_subdivision(asym, E.sigma)
        assert report.is_valid and report.is_complete


def test_vertices_sit_where_the_position_maps_say(corpus, random_expansions):
    for E in [m.expansion for m in corpus.values()] + random_expansions:
        for f in sample_points(E):
            F = fibre(E, f)
            for v in E.vertices():
                assert tuple(position_map(E, v).matrix.apply(f)) == F.positions[v]


def test_combinatorial_type_is_constant_on_the_interior(corpus, random_expansions):
    for E in [m.expansion for m in corpus.values()] + random_expansions:
        table = combinatorial_type(E)
        for f in sample_points(E):
            assert fibre_type(E, fibre(E, f)) == table


def test_tube_vertices(corpus):
    assert tube_vertices(corpus["rank_one"].expansion) == ["v1", "v2"]
    assert tube_vertices(corpus["tube_example"].expansion) == []
    with pytest.raises(MissingOneComplex):
        tube_vertices(corpus["introduction"].expansion)
    E = corpus["tube_example"].expansion
    assert is_bivalent(E, "v1") and not is_bivalent(E, "v0")


def test_extend_base_adds_a_free_direction(corpus):
    E = corpus["rank2rubber2"].expansion
    G = extend_base(E)
    assert G.n_tau == 3 and validate_expansion(G).is_valid
    assert len(G.vertices()) == len(E.vertices())
    for v in E.vertices():
        w = next(u for u in G.vertices() if G.sigma_of(u) == E.sigma_of(v)
                 and position_map(G, u).matrix.select_cols(range(2)) == position_map(E, v).matrix)
        assert position_map(G, w).matrix.col(2) == (0, 0)


@pytest.mark.parametrize("fixture, code", [
    ("non_face_image", NOT_INTEGRAL),
    ("index2_saturation", NOT_SATURATED_OVER_BASE),
    ("sublattice", "SUBDIVISION_NOT_SATURATED"),
])
def test_invalid_expansions_report_the_failing_axiom(fixture, code):
    model = load_input(FIXTURES / f"{fixture}.json", require_valid=False)
    report = validate_expansion(model.expansion)
    assert not report.is_valid
    assert code in {v.code for v in report.violations}
    with pytest.raises(ValidationError) as err:
        load_input(FIXTURES / f"{fixture}.json")
    assert code in {v.code for v in err.value.report.violations}


def test_random_expansions_validate(random_expansions):
    assert len(random_expansions) >= 100
    for E in random_expansions:
        report = validate_expansion(E)
        assert report.is_valid and report.is_complete
