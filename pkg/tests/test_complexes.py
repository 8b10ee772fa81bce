import random
from itertools import product as cartesian

import pytest
from hypothesis import given, strategies as st

from tropical_rubber.complexes import (
    IMPROPER_INTERSECTION,
    NOT_CONTAINED,
    NOT_SATURATED,
    ImproperIntersection,
    build_complex,
    is_covered,
    locate,
    product,
    relative_interior_locate,
    star_subdivide,
    support_contains,
    uncovered_region,
    validate_subdivision,
)
from tropical_rubber.cones import Cone, contains_point, in_relative_interior
from tropical_rubber.linalg import IntMatrix


def orthant(n):
    return build_complex(n, {"O": Cone(n, [tuple(int(i == j) for j in range(n)) for i in range(n)])})


def test_build_complex_closes_under_faces():
    cx = orthant(3)
    assert len(cx) == 8
    assert cx.maximal() == ["O"]
    for name in cx.names():
        assert cx.is_face_of(name, "O")


def test_overlapping_cones_are_rejected_with_witness():
    with pytest.raises(ImproperIntersection) as err:
        build_complex(2, {"a": Cone(2, [(1, 0), (1, 2)]), "b": Cone(2, [(1, 1), (0, 1)])})
    exc = err.value
    assert set(exc.cones) == {"a", "b"}
    w = exc.witness
    assert contains_point(Cone(2, [(1, 0), (1, 2)]), w) and contains_point(Cone(2, [(1, 1), (0, 1)]), w)


@given(st.integers(0, 10 ** 6))
def test_star_subdivision_is_a_complete_subdivision(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3))
    cx = orthant(n)
    for k in range(rng.randint(1, 3)):
        w = tuple(rng.randint(0, 2) for _ in range(n))
        if any(w):
            cx = star_subdivide(cx, w, name=f"w{k}")
    report = validate_subdivision(cx, orthant(n))
    assert report.is_valid and report.is_complete, report.violations


def test_missing_cone_is_reported_incomplete():
    fine = star_subdivide(orthant(2), (1, 1))
    kept = {m: fine[m] for m in fine.maximal()[:1]}
    part = build_complex(2, kept)
    report = validate_subdivision(part, orthant(2))
    assert report.is_valid and not report.is_complete
    assert not is_covered(part, orthant(2))
    missing = uncovered_region(orthant(2)["O"], [part[m] for m in part.maximal()])
    assert missing is not None and missing.dim == 2


def test_cone_outside_target_is_reported():
    bad = build_complex(2, {"x": Cone(2, [(1, 0), (-1, 1)])})
    report = validate_subdivision(bad, orthant(2))
    assert {v.code for v in report.violations} == {NOT_CONTAINED}
    assert any(v.cones[0] == "x" for v in report.violations)


def test_non_saturated_lattice_is_reported():
    c = Cone(2, [(1, 0), (0, 1)], lattice=IntMatrix([[2, 0], [0, 1]]))
    report = validate_subdivision(build_complex(2, {"x": c}), orthant(2))
    assert NOT_SATURATED in {v.code for v in report.violations}
    assert IMPROPER_INTERSECTION == "IMPROPER_INTERSECTION"


def test_locate_and_relative_interior_locate():
    cx = star_subdivide(orthant(2), (1, 1))
    ray = relative_interior_locate(cx, (2, 2))
    assert cx[ray].dim == 1
    assert locate(cx, (2, 2)) == ray
    assert cx[locate(cx, (3, 1))].dim == 2
    assert locate(cx, (-1, 0)) is None
    assert support_contains(cx, (0, 5)) and not support_contains(cx, (0, -1))


def test_every_grid_point_has_exactly_one_relative_interior_cell():
    cx = star_subdivide(star_subdivide(orthant(3), (1, 1, 1)), (1, 2, 0), name="u")
    for x in cartesian(range(0, 3), repeat=3):
        hits = [n for n in cx.names() if in_relative_interior(cx[n], x)]
        assert len(hits) == 1


def test_product_with_base_cone():
    tau = Cone(1, [(1,)])
    P = product(orthant(1), tau)
    assert P.ambient_rank == 2
    assert len(P.maximal()) == 1 and P[P.maximal()[0]].dim == 2
