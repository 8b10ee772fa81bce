"""Cone complexes embedded in a common lattice, and subdivision checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cones import (
    Cone,
    contains_point,
    faces,
    halfspace_intersection,
    in_relative_interior,
    intersect,
    sort_key,
)
from .linalg import IntMatrix, is_saturated_image, rank

# Completeness is decided by exact region subtraction up to this ambient
# rank; above it ``is_complete`` is reported as None ("unknown").
MAX_COMPLETENESS_RANK = 4

# violation codes
NOT_CONTAINED = "SUBDIVISION_NOT_CONTAINED"
NOT_SATURATED = "SUBDIVISION_NOT_SATURATED"
IMPROPER_INTERSECTION = "IMPROPER_INTERSECTION"


class ComplexError(ValueError):
    pass


class ImproperIntersection(ComplexError):
    def __init__(self, c1: str, c2: str, witness: tuple):
        self.cones = (c1, c2)
        self.witness = witness
        super().__init__(
            f"cones {c1!r} and {c2!r} meet outside a common face (witness {list(witness)})"
        )


@dataclass(frozen=True)
class Violation:
    code: str
    cones: tuple[str, ...]
    detail: str
    witness: Optional[tuple] = None

    def sort_key(self):
        return (self.code, self.cones, self.detail)


@dataclass
class SubdivisionReport:
    is_complete: Optional[bool]
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations


class ConeComplex:
    """Finite set of named cones, closed under faces, meeting along faces.

    Build instances with :func:`build_complex`.
    """

    def __init__(self, ambient_rank: int, cones: Mapping[str, Cone], faces_of: Mapping[str, frozenset]):
        self.ambient_rank = ambient_rank
        self.cones = dict(cones)
        self.faces_of = dict(faces_of)
        self._by_key = {c.key: name for name, c in self.cones.items()}

    def __getitem__(self, name: str) -> Cone:
        return self.cones[name]

    def __contains__(self, name: str) -> bool:
        return name in self.cones

    def __iter__(self):
        return iter(self.names())

    def __len__(self) -> int:
        return len(self.cones)

    def names(self) -> list[str]:
        """Names in canonical order (dimension first)."""
        return sorted(self.cones, key=lambda n: (sort_key(self.cones[n]), n))

    def name_of(self, cone: Cone) -> Optional[str]:
        return self._by_key.get(cone.key)

    def maximal(self) -> list[str]:
        inside = set()
        for name, fs in self.faces_of.items():
            inside |= fs - {name}
        return [n for n in self.names() if n not in inside]

    def is_face_of(self, f: str, c: str) -> bool:
        return f in self.faces_of[c]

    def cofaces(self, name: str) -> list[str]:
        return [c for c in self.names() if name in self.faces_of[c] and c != name]


def build_complex(
    ambient_rank: int,
    cones: Union[Mapping[str, Cone], Iterable[tuple[str, Cone]]],
    auto_prefix: str = "c",
) -> ConeComplex:
    """Close a named list of cones under faces and check the complex axioms.

    Faces not already named receive generated names ``{auto_prefix}{i}`` in
    canonical order.  Raises :class:`ImproperIntersection` when two cones
    meet in something that is not a face of both.
    """
    items = list(cones.items()) if isinstance(cones, Mapping) else list(cones)
    named: dict[str, Cone] = {}
    by_key: dict[tuple, str] = {}
    for name, c in items:
        if c.ambient_rank != ambient_rank:
            raise ComplexError(f"cone {name!r} has ambient rank {c.ambient_rank}, expected {ambient_rank}")
        if name in named:
            raise ComplexError(f"duplicate cone name {name!r}")
        if c.key in by_key:
            raise ComplexError(f"cones {by_key[c.key]!r} and {name!r} are equal")
        named[name] = c
        by_key[c.key] = name

    face_lists = {name: faces(c) for name, c in named.items()}
    anonymous: dict[tuple, Cone] = {}
    for fl in face_lists.values():
        for f in fl:
            if f.key not in by_key and f.key not in anonymous:
                anonymous[f.key] = f
    taken = set(named)
    i = 0
    for f in sorted(anonymous.values(), key=sort_key):
        while f"{auto_prefix}{i}" in taken:
            i += 1
        name = f"{auto_prefix}{i}"
        taken.add(name)
        named[name] = f
        by_key[f.key] = name
        face_lists[name] = faces(f)

    faces_of = {
        name: frozenset(by_key[f.key] for f in fl) for name, fl in face_lists.items()
    }
    cx = ConeComplex(ambient_rank, named, faces_of)
    _check_intersections(cx)
    return cx


def _check_intersections(cx: ConeComplex) -> None:
    maximal = cx.maximal()
    for a_i, a in enumerate(maximal):
        for b in maximal[a_i + 1:]:
            ca, cb = cx[a], cx[b]
            meet = intersect(ca, cb)
            name = cx.name_of(meet)
            if name is not None and name in cx.faces_of[a] and name in cx.faces_of[b]:
                continue
            raise ImproperIntersection(a, b, meet.relative_interior_point())


def product(delta: ConeComplex, tau: Cone, tau_name: str = "tau") -> ConeComplex:
    """The product complex ``delta x tau`` (cones ``sigma x phi``, phi a face of tau)."""
    n, m = delta.ambient_rank, tau.ambient_rank
    tau_faces = faces(tau)
    tau_names = {}
    for i, f in enumerate(tau_faces):
        tau_names[f.key] = tau_name if f.key == tau.key else f"{tau_name}.{i}"
    cones = {}
    for sname in delta.names():
        s = delta[sname]
        for f in tau_faces:
            gens = [tuple(g) + (0,) * m for g in s.generators]
            gens += [(0,) * n + tuple(g) for g in f.generators]
            cones[f"{sname}x{tau_names[f.key]}"] = Cone(n + m, gens)
    return build_complex(n + m, cones)


def locate(delta: ConeComplex, x: Sequence) -> Optional[str]:
    """Name of the minimal cone containing ``x``, or None outside the support."""
    best = None
    for name in delta.names():
        c = delta[name]
        if contains_point(c, x):
            if best is None or c.dim < delta[best].dim:
                best = name
    return best


def support_contains(delta: ConeComplex, x: Sequence) -> bool:
    return any(contains_point(delta[m], x) for m in delta.maximal())


def validate_subdivision(upsilon: ConeComplex, delta: ConeComplex) -> SubdivisionReport:
    """Check that ``upsilon`` (embedded) is a conical subdivision of ``delta``.

    Containment of every cone in some cone of ``delta`` and saturation of
    its lattice are checked cone by cone; injectivity on supports holds
    because ``upsilon`` is itself a complex.  Completeness is decided by
    region subtraction.
    """
    if upsilon.ambient_rank != delta.ambient_rank:
        raise ComplexError("complexes live in different lattices")
    violations = []
    for name in upsilon.names():
        w = upsilon[name]
        host = locate(delta, w.relative_interior_point())
        if host is None or not all(contains_point(delta[host], g) for g in w.generators):
            violations.append(Violation(
                NOT_CONTAINED, (name,), "not contained in any cone of the target",
                w.relative_interior_point(),
            ))
            continue
        if w.lattice.ncols and not is_saturated_image(w.lattice):
            violations.append(Violation(
                NOT_SATURATED, (name, host),
                "integral points do not form a saturated submonoid of the target cone",
                tuple(map(tuple, w.lattice.columns)),
            ))
    complete = None
    notes = []
    if upsilon.ambient_rank <= MAX_COMPLETENESS_RANK:
        complete = not violations and is_covered(upsilon, delta)
    else:
        notes.append(f"completeness not decided above ambient rank {MAX_COMPLETENESS_RANK}")
    violations.sort(key=Violation.sort_key)
    return SubdivisionReport(is_complete=complete, violations=violations, notes=notes)


def is_covered(upsilon: ConeComplex, delta: ConeComplex) -> bool:
    """True iff ``|delta| ⊆ |upsilon|``."""
    for name in delta.maximal():
        if uncovered_region(delta[name], [upsilon[u] for u in upsilon.maximal()]) is not None:
            return False
    return True


def uncovered_region(c: Cone, pieces: Sequence[Cone]) -> Optional[Cone]:
    """A full-dimensional subcone of ``c`` not covered by ``pieces``.

    Returns None if the pieces cover ``c``.  The pieces are closed, so any
    uncovered part of ``c`` contains an open subset of ``c``; it is enough
    to track regions of full dimension.
    """
    d = c.dim
    span = c.span_basis.columns
    regions = [c]
    for piece in pieces:
        # normals vanishing on span(c) never separate anything inside c
        normals = [
            n for n in piece.facet_normals.columns
            if any(sum(a * b for a, b in zip(n, v)) for v in span)
        ]
        nxt = []
        for r in regions:
            if intersect(r, piece).dim < d:
                nxt.append(r)
                continue
            # r minus piece, cut into pieces on which the first violated
            # facet of ``piece`` is fixed
            prefix: list[tuple[int, ...]] = []
            for n in normals:
                neg = tuple(-x for x in n)
                part = halfspace_intersection(
                    c.ambient_rank, list(r.facet_normals.columns) + prefix + [neg]
                )
                if part.dim == d:
                    nxt.append(part)
                prefix.append(n)
        regions = nxt
        if not regions:
            return None
    return regions[0]


def star_subdivide(cx: ConeComplex, w: Sequence[int], name: str = "w") -> ConeComplex:
    """Stellar subdivision of a complex of strictly convex cones at the ray ``w``."""
    w = tuple(w)
    out: dict[str, Cone] = {}
    for m in cx.maximal():
        c = cx[m]
        if not contains_point(c, w):
            out[m] = c
            continue
        for i, f in enumerate(x for x in faces(c) if x.dim == c.dim - 1):
            if contains_point(f, w):
                continue
            out[f"{m}/{name}{i}"] = Cone(cx.ambient_rank, list(f.generators) + [w])
    # drop duplicates and cones that ended up as faces of others
    proper_faces = {f.key for o in out.values() for f in faces(o) if f.key != o.key}
    final: dict[str, Cone] = {}
    for k, c in out.items():
        if c.key in proper_faces or c.key in {o.key for o in final.values()}:
            continue
        final[k] = c
    return build_complex(cx.ambient_rank, final)


def relative_interior_locate(delta: ConeComplex, x: Sequence) -> Optional[str]:
    """The cone whose relative interior contains ``x``."""
    for name in delta.names():
        if in_relative_interior(delta[name], x):
            return name
    return None


def renamed(cx: ConeComplex, mapping: Mapping[str, str]) -> ConeComplex:
    """Copy of ``cx`` with some cones renamed; unmapped names are kept."""
    new = {name: mapping.get(name, name) for name in cx.cones}
    if len(set(new.values())) != len(new):
        raise ComplexError("renaming would merge two cones")
    return ConeComplex(
        cx.ambient_rank,
        {new[n]: c for n, c in cx.cones.items()},
        {new[n]: frozenset(new[f] for f in fs) for n, fs in cx.faces_of.items()},
    )
