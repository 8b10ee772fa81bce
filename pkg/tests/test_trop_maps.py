from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropical_rubber.trop_maps import (
    BASE_POINT_NOT_INTERIOR,
    EDGE_OUTSIDE_FIBRE,
    ENDPOINT_MISMATCH,
    MISSED_STRATUM,
    NONPOSITIVE_LENGTH,
    NOT_TUBE_ALONG_TUBE,
    SLOPE_NOT_PRIMITIVE,
    TUBE_ALONG_NON_TUBE,
    UNKNOWN_TARGET,
    UNSTABLE_COMPONENT,
    VERTEX_OUTSIDE_TARGET,
    Leg,
    MapEdge,
    MapVertex,
    NotBivalent,
    TropicalMap,
    check_stability,
    met_strata,
    tube_along,
    validate_map,
)


def codes(findings):
    return {f.code for f in findings}


def chain_map(a, b, mark=False):
    """The rank-one chain over the base point ``(a, b)``."""
    vs = {
        "u0": MapVertex("u0", "v0", (Fraction(0),), geometrically_stable=True),
        "u1": MapVertex("u1", "v1", (Fraction(a),), marks=int(mark)),
        "u2": MapVertex("u2", "v2", (Fraction(a + b),)),
    }
    edges = [
        MapEdge("e01", "u0", "u1", (1,), Fraction(a)),
        MapEdge("e12", "u1", "u2", (1,), Fraction(b)),
        MapEdge("out", "u2", None, (1,)),
    ]
    return TropicalMap("chain", (Fraction(a), Fraction(b)), vs, edges)


positive = st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=12)


@given(positive, positive)
def test_chain_over_any_interior_point_is_valid_and_stable(corpus, a, b):
    E = corpus["rank_one"].expansion
    m = chain_map(a, b)
    assert validate_map(E, m).is_valid
    verdict = check_stability(E, m)
    assert verdict.stable, verdict.reasons
    assert verdict.tube_vertices == ["v1", "v2"]


@given(positive, positive)
def test_edge_orientation_does_not_matter(corpus, a, b):
    E = corpus["rank_one"].expansion
    m = chain_map(a, b)
    flipped = [replace(e, source=e.target, target=e.source, slope=(-e.slope[0],))
               if e.target is not None else e for e in m.edges]
    m2 = replace(m, edges=flipped)
    assert validate_map(E, m2).is_valid
    assert check_stability(E, m2) == check_stability(E, m)


def test_marked_tube_component_is_not_a_tube(corpus):
    E = corpus["rank_one"].expansion
    verdict = check_stability(E, chain_map(1, 1, mark=True))
    assert [(f.code, f.subject) for f in verdict.reasons] == [(NOT_TUBE_ALONG_TUBE, "v1")]


def test_tube_example_verdicts(corpus):
    model = corpus["tube_example"]
    E = model.expansion
    m1 = model.maps["m1"]
    assert validate_map(E, m1).is_valid
    assert [(f.code, f.subject) for f in check_stability(E, m1).reasons] == [(TUBE_ALONG_NON_TUBE, "v1")]
    assert tube_along(E, m1, "v1")
    two = model.maps["m1_two_slopes"]
    assert not tube_along(E, two, "v1")
    assert check_stability(E, two).stable


def test_tube_along_needs_a_bivalent_vertex(corpus):
    model = corpus["tube_example"]
    with pytest.raises(NotBivalent):
        tube_along(model.expansion, model.maps["m1"], "v0")
    with pytest.raises(NotBivalent):
        tube_along(model.expansion, model.maps["m1"], "P01")


def test_no_component_over_the_vertex_is_not_a_tube(corpus):
    model = corpus["tube_example"]
    m = model.maps["m1"]
    vs = {k: v for k, v in m.vertices.items() if k != "u1"}
    edges = [e for e in m.edges if e.name not in ("a", "b")]
    bare = replace(m, vertices=vs, edges=edges)
    assert not tube_along(model.expansion, bare, "v1")
    assert "v1" not in met_strata(model.expansion, bare)


def test_missing_stratum(corpus):
    model = corpus["actionondiv"]
    verdict = check_stability(model.expansion, model.maps["m_missing"])
    assert not verdict.stable
    assert MISSED_STRATUM in codes(verdict.reasons)


def test_contracted_component_is_unstable(corpus):
    model = corpus["tube_example"]
    m = model.maps["m1_two_slopes"]
    vs = dict(m.vertices)
    vs["ghost"] = MapVertex("ghost", "v2", (Fraction(1), Fraction(1)))
    legs = list(m.legs) + [Leg("z", "ghost", (0, 0))]
    verdict = check_stability(model.expansion, replace(m, vertices=vs, legs=legs))
    assert [(f.code, f.subject) for f in verdict.reasons] == [(UNSTABLE_COMPONENT, "ghost")]


@pytest.mark.parametrize("edit, code", [
    (lambda m: replace(m, base_point=(Fraction(0),)), BASE_POINT_NOT_INTERIOR),
    (lambda m: _vertex(m, "u1", target="nowhere"), UNKNOWN_TARGET),
    (lambda m: _vertex(m, "u1", position=(Fraction(1, 2), Fraction(1))), VERTEX_OUTSIDE_TARGET),
    (lambda m: _edge(m, "a", slope=(0, 2)), SLOPE_NOT_PRIMITIVE),
    (lambda m: _edge(m, "a", length=Fraction(2)), ENDPOINT_MISMATCH),
    (lambda m: _edge(m, "a", length=Fraction(0)), NONPOSITIVE_LENGTH),
    (lambda m: _edge(m, "h", slope=(-1, 0)), EDGE_OUTSIDE_FIBRE),
])
def test_map_validation_findings(corpus, edit, code):
    model = corpus["tube_example"]
    report = validate_map(model.expansion, edit(model.maps["m1"]))
    assert code in codes(report.violations)


def _vertex(m, name, **changes):
    vs = dict(m.vertices)
    vs[name] = replace(vs[name], **changes)
    return replace(m, vertices=vs)


def _edge(m, name, **changes):
    return replace(m, edges=[replace(e, **changes) if e.name == name else e for e in m.edges])
