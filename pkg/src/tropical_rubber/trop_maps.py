"""Tropical maps into a fibre of an expansion, and their stability.

Only the combinatorial half of stability is decided here.  Whether a
component is stable as a map to the underlying variety cannot be read off
tropical data, so each map-vertex carries a ``geometrically_stable`` flag
supplied by the user.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .complexes import locate, relative_interior_locate
from .cones import in_relative_interior
from .expansion import (
    ExpansionError,
    TropicalExpansion,
    is_bivalent,
    tube_vertices,
)
from .linalg import IntMatrix, primitive, saturation, solve_integral

# stability reason codes
MISSED_STRATUM = "MissedStratum"
TUBE_ALONG_NON_TUBE = "TubeAlongNonTube"
NOT_TUBE_ALONG_TUBE = "NotTubeAlongTube"
UNSTABLE_COMPONENT = "UnstableComponent"

# map validation codes
BASE_POINT_NOT_INTERIOR = "BASE_POINT_NOT_INTERIOR"
UNKNOWN_TARGET = "UNKNOWN_TARGET"
VERTEX_OUTSIDE_TARGET = "VERTEX_OUTSIDE_TARGET"
UNKNOWN_ENDPOINT = "UNKNOWN_ENDPOINT"
SLOPE_NOT_PRIMITIVE = "SLOPE_NOT_PRIMITIVE"
SLOPE_OUTSIDE_LATTICE = "SLOPE_OUTSIDE_LATTICE"
ENDPOINT_MISMATCH = "ENDPOINT_MISMATCH"
NONPOSITIVE_LENGTH = "NONPOSITIVE_LENGTH"
EDGE_OUTSIDE_FIBRE = "EDGE_OUTSIDE_FIBRE"

ASSUMPTIONS = (
    "geometric stability of each component is taken from the geometrically_stable flag",
    "legs count as special points when testing semistability",
    "balancing is checked only at map-vertices over bivalent fibre vertices",
)


class NotBivalent(ExpansionError):
    pass


@dataclass(frozen=True)
class MapVertex:
    name: str
    target: str
    position: tuple  # rational point of N_sigma
    genus: int = 0
    marks: int = 0
    geometrically_stable: bool = False


@dataclass(frozen=True)
class MapEdge:
    name: str
    source: str
    target: Optional[str]  # None for an unbounded edge
    slope: tuple[int, ...]
    length: Optional[Fraction] = None


@dataclass(frozen=True)
class Leg:
    name: str
    vertex: str
    slope: tuple[int, ...]


@dataclass
class TropicalMap:
    name: str
    base_point: tuple
    vertices: dict
    edges: list
    legs: list = field(default_factory=list)

    def outgoing(self, u: str) -> list[tuple[int, ...]]:
        """Slopes leaving ``u`` along every incident edge and leg.

        A loop contributes both of its directions.
        """
        out = []
        for e in self.edges:
            if e.source == u:
                out.append(tuple(e.slope))
            if e.target == u:
                out.append(tuple(-x for x in e.slope))
        for leg in self.legs:
            if leg.vertex == u:
                out.append(tuple(leg.slope))
        return out

    def valence(self, u: str) -> int:
        return len(self.outgoing(u))

    def over(self, v: str) -> list[str]:
        return sorted(n for n, mv in self.vertices.items() if mv.target == v)


@dataclass(frozen=True)
class Finding:
    code: str
    subject: str
    detail: str

    def sort_key(self):
        return (self.code, self.subject, self.detail)


@dataclass
class MapReport:
    violations: list

    @property
    def is_valid(self) -> bool:
        return not self.violations


@dataclass
class StabilityVerdict:
    stable: bool
    reasons: list
    tube_vertices: list
    met: list
    assumptions: tuple = ASSUMPTIONS


def _lift(E: TropicalExpansion, m: TropicalMap, x: Sequence) -> tuple:
    return tuple(Fraction(a) for a in x) + tuple(m.base_point)


def _edge_probe(m: TropicalMap, e: MapEdge) -> Optional[tuple]:
    """A point in the relative interior of the image of ``e``."""
    a = m.vertices.get(e.source)
    if a is None:
        return None
    if e.target is None:
        return tuple(Fraction(x) + s for x, s in zip(a.position, e.slope))
    b = m.vertices.get(e.target)
    if b is None:
        return None
    return tuple((Fraction(x) + Fraction(y)) / 2 for x, y in zip(a.position, b.position))


def validate_map(E: TropicalExpansion, m: TropicalMap) -> MapReport:
    """Check the geometry of ``m`` against the fibre over its base point."""
    found = []
    strata = set(E.strata())
    if not in_relative_interior(E.tau, m.base_point):
        found.append(Finding(BASE_POINT_NOT_INTERIOR, m.name,
                             "base point is not in the relative interior of the base"))
    for name in sorted(m.vertices):
        u = m.vertices[name]
        if u.target not in strata:
            found.append(Finding(UNKNOWN_TARGET, name, f"{u.target!r} is not a fibre polyhedron"))
            continue
        if not in_relative_interior(E.upsilon[u.target], _lift(E, m, u.position)):
            found.append(Finding(VERTEX_OUTSIDE_TARGET, name,
                                 f"position is not in the relative interior of {u.target}"))
    for e in m.edges:
        ends = [e.source] + ([e.target] if e.target is not None else [])
        missing = [x for x in ends if x not in m.vertices]
        if missing:
            found.append(Finding(UNKNOWN_ENDPOINT, e.name, f"unknown vertices {missing}"))
            continue
        slope = tuple(e.slope)
        if not any(slope) or primitive(slope) != slope:
            found.append(Finding(SLOPE_NOT_PRIMITIVE, e.name, f"slope {list(slope)} is not primitive"))
        if e.target is not None:
            a, b = m.vertices[e.source].position, m.vertices[e.target].position
            if e.length is None or e.length <= 0:
                found.append(Finding(NONPOSITIVE_LENGTH, e.name, "bounded edge needs a positive length"))
            else:
                expected = tuple(Fraction(x) + e.length * s for x, s in zip(a, slope))
                if expected != tuple(Fraction(y) for y in b):
                    found.append(Finding(ENDPOINT_MISMATCH, e.name,
                                         "target position differs from source + length * slope"))
        probe = _edge_probe(m, e)
        host = locate(E.sigma, probe)
        if host is None:
            found.append(Finding(SLOPE_OUTSIDE_LATTICE, e.name, "edge leaves the support of sigma"))
        elif solve_integral(E.sigma[host].lattice, slope) is None:
            found.append(Finding(SLOPE_OUTSIDE_LATTICE, e.name,
                                 f"slope {list(slope)} is not in the lattice of {host}"))
        if relative_interior_locate(E.upsilon, _lift(E, m, probe)) not in strata:
            found.append(Finding(EDGE_OUTSIDE_FIBRE, e.name, "edge leaves the fibre complex"))
    found.sort(key=Finding.sort_key)
    return MapReport(violations=found)


def slope_direction(slopes: Sequence[Sequence[int]]) -> Optional[IntMatrix]:
    """Saturated span of some slopes, or None if they are all zero."""
    nonzero = [tuple(s) for s in slopes if any(s)]
    if not nonzero:
        return None
    return saturation(IntMatrix.from_columns(nonzero, len(nonzero[0])))


def _is_tube_component(m: TropicalMap, u: str) -> bool:
    mv = m.vertices[u]
    if mv.genus != 0 or mv.marks != 0 or mv.geometrically_stable:
        return False
    slopes = m.outgoing(u)
    if len(slopes) != 2:
        return False
    if not any(any(s) for s in slopes):
        return False  # constant in the fibre directions
    # balancing at a bivalent vertex: the two slopes agree along the path
    return all(a + b == 0 for a, b in zip(*slopes))


def tube_along(E: TropicalExpansion, m: TropicalMap, v: str) -> bool:
    """Whether ``m`` is a tube along the component of the fibre vertex ``v``."""
    if v not in E.vertices() or not is_bivalent(E, v):
        raise NotBivalent(f"{v} is not a bivalent vertex of the fibre")
    over = m.over(v)
    if not over:
        return False
    if not all(_is_tube_component(m, u) for u in over):
        return False
    span = slope_direction([s for u in over for s in m.outgoing(u)])
    return span is not None and span.ncols == 1


def met_strata(E: TropicalExpansion, m: TropicalMap) -> list[str]:
    """Strata touched by a map-vertex or by the interior of an edge."""
    strata = set(E.strata())
    met = {mv.target for mv in m.vertices.values() if mv.target in strata}
    for e in m.edges:
        probe = _edge_probe(m, e)
        if probe is None:
            continue
        cell = relative_interior_locate(E.upsilon, _lift(E, m, probe))
        if cell in strata:
            met.add(cell)
    return [s for s in E.strata() if s in met]


def _is_unstable_component(m: TropicalMap, u: str) -> bool:
    mv = m.vertices[u]
    if mv.genus != 0 or mv.geometrically_stable:
        return False
    slopes = m.outgoing(u)
    special = len(slopes) + mv.marks
    return special < 3 and not any(any(s) for s in slopes)


def check_stability(E: TropicalExpansion, m: TropicalMap) -> StabilityVerdict:
    tubes = tube_vertices(E)
    reasons = []
    met = met_strata(E, m)
    for s in E.strata():
        if s not in met:
            reasons.append(Finding(MISSED_STRATUM, s, "no component of the map meets this stratum"))
    for v in E.vertices():
        if not is_bivalent(E, v):
            if v in tubes:
                reasons.append(Finding(NOT_TUBE_ALONG_TUBE, v, "tube vertex is not bivalent"))
            continue
        along = tube_along(E, m, v)
        if v in tubes and not along:
            reasons.append(Finding(NOT_TUBE_ALONG_TUBE, v, "map is not a tube along a tube component"))
        elif v not in tubes and along:
            reasons.append(Finding(TUBE_ALONG_NON_TUBE, v, "map is a tube along a non-tube component"))
    for u in sorted(m.vertices):
        if _is_unstable_component(m, u):
            reasons.append(Finding(UNSTABLE_COMPONENT, u,
                                   "genus 0, fewer than 3 special points and constant in the fibres"))
    reasons.sort(key=Finding.sort_key)
    return StabilityVerdict(stable=not reasons, reasons=reasons, tube_vertices=tubes, met=met)
