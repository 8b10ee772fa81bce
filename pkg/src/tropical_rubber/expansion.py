"""Tropical expansions of a cone complex over a base cone.

An expansion is a subdivision ``upsilon`` of ``sigma x tau`` embedded in
``Z^(n_sigma + n_tau)``.  The first ``n_sigma`` coordinates are the
``sigma`` factor (projection ``r``), the last ``n_tau`` coordinates the base
(projection ``p``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .complexes import (
    ConeComplex,
    SubdivisionReport,
    Violation,
    build_complex,
    locate,
    product,
    renamed,
    validate_subdivision,
)
from .cones import Cone, contains_point, faces, in_relative_interior
from .linalg import (
    IntMatrix,
    is_saturated_image,
    kernel_basis,
    lattice_basis,
    primitive,
    saturation,
    solve_rational,
)

NOT_INTEGRAL = "P_INTEGRALITY"
NOT_SATURATED_OVER_BASE = "P_SATURATION"

FLATNESS_NOTE = (
    "integral and saturated projection: the associated family is flat with reduced fibres"
)


class ExpansionError(ValueError):
    pass


class PointOutsideBase(ExpansionError):
    pass


class MissingOneComplex(ExpansionError):
    pass


class InvalidTube(ExpansionError):
    def __init__(self, vertex: str, detail: str):
        self.vertex = vertex
        super().__init__(f"{vertex}: {detail}")


@dataclass
class TropicalExpansion:
    sigma: ConeComplex
    tau: Cone
    upsilon: ConeComplex
    tau_labels: tuple[str, ...] = ()
    sigma_labels: tuple[str, ...] = ()
    one_complex_vertices: Optional[frozenset] = None

    def __post_init__(self):
        n_s, n_t = self.sigma.ambient_rank, self.tau.ambient_rank
        if self.upsilon.ambient_rank != n_s + n_t:
            raise ExpansionError(
                f"upsilon has rank {self.upsilon.ambient_rank}, expected {n_s + n_t}"
            )
        if self.tau.dim != n_t:
            raise ExpansionError("the base cone must be full-dimensional in its lattice")
        if not self.tau_labels:
            self.tau_labels = tuple(f"e{i + 1}" for i in range(n_t))
        if not self.sigma_labels:
            self.sigma_labels = tuple(f"l{i + 1}" for i in range(n_s))
        self._image_cache: dict[str, Cone] = {}
        self._strata: Optional[list[str]] = None

    @property
    def n_sigma(self) -> int:
        return self.sigma.ambient_rank

    @property
    def n_tau(self) -> int:
        return self.tau.ambient_rank

    @property
    def p(self) -> IntMatrix:
        n, m = self.n_sigma, self.n_tau
        return IntMatrix([[int(j == n + i) for j in range(n + m)] for i in range(m)], ncols=n + m)

    @property
    def r(self) -> IntMatrix:
        n, m = self.n_sigma, self.n_tau
        return IntMatrix([[int(j == i) for j in range(n + m)] for i in range(n)], ncols=n + m)

    def base_part(self, x: Sequence) -> tuple:
        return tuple(x[self.n_sigma:])

    def sigma_part(self, x: Sequence) -> tuple:
        return tuple(x[: self.n_sigma])

    def image(self, name: str) -> Cone:
        """``p`` applied to the cone ``name`` of upsilon."""
        if name not in self._image_cache:
            w = self.upsilon[name]
            self._image_cache[name] = Cone(self.n_tau, [self.base_part(g) for g in w.generators])
        return self._image_cache[name]

    def over(self, face: Cone) -> list[str]:
        """Names of the cones of upsilon mapping onto ``face``."""
        return [n for n in self.upsilon.names() if self.image(n).key == face.key]

    def strata(self) -> list[str]:
        """Cones mapping onto the whole base, in canonical order."""
        if self._strata is None:
            self._strata = self.over(self.tau)
        return list(self._strata)

    def vertices(self) -> list[str]:
        return [n for n in self.strata() if self.upsilon[n].dim == self.tau.dim]

    def polyhedron_dim(self, name: str) -> int:
        return self.upsilon[name].dim - self.image(name).dim

    def sigma_of(self, name: str) -> str:
        """Minimal cone of sigma containing the ``r``-image of ``name``."""
        pt = self.sigma_part(self.upsilon[name].relative_interior_point())
        host = locate(self.sigma, pt)
        if host is None:
            raise ExpansionError(f"{name} does not lie over sigma")
        return host

    def slope_lattice(self, name: str) -> IntMatrix:
        """Canonical basis of the directions inside the polyhedron ``name``.

        This is ``r`` of the kernel of ``p`` on the lattice of the cone.
        """
        w = self.upsilon[name]
        B = w.lattice
        if B.ncols == 0:
            return IntMatrix.zeros(self.n_sigma, 0)
        ker = kernel_basis(self.p @ B)
        if ker.ncols == 0:
            return IntMatrix.zeros(self.n_sigma, 0)
        return lattice_basis(self.r @ B @ ker)

    def bounded_faces(self, name: str) -> list[str]:
        """Vertices of the polyhedron ``name`` (faces that are vertex cones)."""
        verts = set(self.vertices())
        return [f for f in self.upsilon.names() if f in self.upsilon.faces_of[name] and f in verts]

    def incident_edges(self, vertex: str) -> list[str]:
        return [e for e in self.strata()
                if self.polyhedron_dim(e) == 1 and vertex in self.upsilon.faces_of[e]]


def make_expansion(
    sigma_cones: Mapping[str, Cone],
    tau: Cone,
    upsilon_cones: Mapping[str, Cone],
    tau_labels: Sequence[str] = (),
    sigma_labels: Sequence[str] = (),
    one_complex_vertices: Optional[Iterable[str]] = None,
    sigma_rank: Optional[int] = None,
) -> TropicalExpansion:
    """Build an expansion from named cones, naming anonymous faces.

    Unnamed faces of sigma get names ``s0, s1, ...``.  Unnamed faces of
    upsilon get ``v0, v1, ...`` if they are vertex cones, ``P0, P1, ...`` if
    they are other strata and ``c0, c1, ...`` otherwise.
    """
    n_t = tau.ambient_rank
    if sigma_rank is None:
        first = next(iter(sigma_cones.values()), None)
        sigma_rank = first.ambient_rank if first is not None else 0
    n_s = sigma_rank
    sigma = build_complex(n_s, sigma_cones, auto_prefix="s")
    upsilon = build_complex(n_s + n_t, upsilon_cones, auto_prefix="_anon")
    E = TropicalExpansion(
        sigma=sigma, tau=tau, upsilon=upsilon,
        tau_labels=tuple(tau_labels), sigma_labels=tuple(sigma_labels),
        one_complex_vertices=frozenset(one_complex_vertices) if one_complex_vertices is not None else None,
    )
    anon = [n for n in upsilon.names() if n not in upsilon_cones]
    if not anon:
        return E
    taken = set(upsilon_cones)
    counters = {"v": 0, "P": 0, "c": 0}
    mapping = {}
    for name in anon:
        if E.image(name).key == tau.key:
            prefix = "v" if upsilon[name].dim == tau.dim else "P"
        else:
            prefix = "c"
        while f"{prefix}{counters[prefix]}" in taken:
            counters[prefix] += 1
        mapping[name] = f"{prefix}{counters[prefix]}"
        taken.add(mapping[name])
    return TropicalExpansion(
        sigma=sigma, tau=tau, upsilon=renamed(upsilon, mapping),
        tau_labels=E.tau_labels, sigma_labels=E.sigma_labels,
        one_complex_vertices=E.one_complex_vertices,
    )


# -- validation ---------------------------------------------------------------


@dataclass
class ExpansionReport(SubdivisionReport):
    cone_verdicts: dict = field(default_factory=dict)


def validate_expansion(E: TropicalExpansion) -> ExpansionReport:
    """Check the subdivision axioms and the integrality/saturation of ``p``."""
    sub = validate_subdivision(E.upsilon, product(E.sigma, E.tau))
    violations = list(sub.violations)
    tau_faces = {f.key: f for f in faces(E.tau)}
    verdicts = {}
    for name in E.upsilon.names():
        img = E.image(name)
        w = E.upsilon[name]
        if img.key not in tau_faces:
            violations.append(Violation(
                NOT_INTEGRAL, (name,), "image under p is not a face of the base",
                tuple(img.generators),
            ))
            verdicts[name] = NOT_INTEGRAL
            continue
        lat = E.p @ w.lattice
        if lat.ncols and not is_saturated_image(lat):
            violations.append(Violation(
                NOT_SATURATED_OVER_BASE, (name,),
                "lattice of the cone does not surject onto the lattice of its image face",
                tuple(lat.rows),
            ))
            verdicts[name] = NOT_SATURATED_OVER_BASE
            continue
        verdicts[name] = "ok"
    violations.sort(key=Violation.sort_key)
    notes = list(sub.notes)
    if not violations:
        notes.append(FLATNESS_NOTE)
    return ExpansionReport(
        is_complete=sub.is_complete, violations=violations, notes=notes, cone_verdicts=verdicts
    )


# -- fibres -------------------------------------------------------------------


@dataclass(frozen=True)
class FibrePolyhedron:
    name: str
    dim: int
    sigma: str
    vertices: tuple[str, ...]
    recession: tuple[tuple[int, ...], ...]
    faces: tuple[str, ...]
    slope: Optional[tuple[int, ...]] = None
    length: Optional[Fraction] = None


@dataclass
class FibreComplex:
    base_point: tuple
    base_face: Cone
    positions: dict  # vertex name -> rational point in N_sigma
    polyhedra: dict  # name -> FibrePolyhedron

    def names(self) -> list[str]:
        return list(self.polyhedra)

    def vertex_names(self) -> list[str]:
        return [n for n, P in self.polyhedra.items() if P.dim == 0]

    def edges(self) -> list[str]:
        return [n for n, P in self.polyhedra.items() if P.dim == 1]


def _base_face(E: TropicalExpansion, f: Sequence) -> Cone:
    for face in faces(E.tau):
        if in_relative_interior(face, f):
            return face
    raise PointOutsideBase(f"({','.join(str(x) for x in f)}) is not in the base cone")


def _point_over(E: TropicalExpansion, name: str, f: Sequence) -> tuple:
    """The unique point of cone ``name`` over ``f`` (cone maps isomorphically)."""
    B = E.upsilon[name].lattice
    y = solve_rational(E.p @ B, f)
    if y is None:
        raise ExpansionError(f"{name} has no point over {list(f)}")
    return tuple(Fraction(x) for x in (E.r @ B).apply(y))


def fibre(E: TropicalExpansion, f: Sequence) -> FibreComplex:
    """The polyhedral complex ``p^-1(f)``, drawn in the coordinates of sigma."""
    f = tuple(Fraction(x) for x in f)
    if len(f) != E.n_tau:
        raise PointOutsideBase(f"base point must have {E.n_tau} coordinates")
    if not contains_point(E.tau, f):
        raise PointOutsideBase(f"({','.join(str(x) for x in f)}) is not in the base cone")
    face = _base_face(E, f)
    cells = E.over(face)
    cell_set = set(cells)
    vertices = [c for c in cells if E.upsilon[c].dim == face.dim]
    positions = {v: _point_over(E, v, f) for v in vertices}
    polyhedra = {}
    for name in cells:
        w = E.upsilon[name]
        dim = w.dim - face.dim
        own_vertices = tuple(v for v in vertices if v in E.upsilon.faces_of[name])
        recession = tuple(sorted(
            primitive(E.sigma_part(g)) for g in w.generators if not any(E.base_part(g))
        ))
        slope = length = None
        if dim == 1:
            if len(own_vertices) == 2:
                a, b = (positions[v] for v in own_vertices)
                diff = tuple(y - x for x, y in zip(a, b))
                slope = _primitive_rational(diff)
                k = next(i for i, s in enumerate(slope) if s)
                length = diff[k] / slope[k]
            else:
                slope = recession[0]
        polyhedra[name] = FibrePolyhedron(
            name=name,
            dim=dim,
            sigma=E.sigma_of(name),
            vertices=own_vertices,
            recession=recession,
            faces=tuple(x for x in cells if x in E.upsilon.faces_of[name] and x != name),
            slope=slope,
            length=length,
        )
    ordered = dict(sorted(polyhedra.items(), key=lambda kv: (kv[1].dim, kv[0])))
    assert set(ordered) == cell_set
    return FibreComplex(base_point=f, base_face=face, positions=positions, polyhedra=ordered)


def _primitive_rational(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for a in v:
        d = Fraction(a).denominator
        den = den * d // _gcd(den, d)
    return primitive([int(Fraction(a) * den) for a in v])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def sample_points(E: TropicalExpansion) -> list[tuple[Fraction, ...]]:
    """Three deterministic points in the relative interior of the base."""
    gens = E.tau.generators
    m = len(gens)
    bary = tuple(sum(Fraction(g[i], m) for g in gens) for i in range(E.n_tau))
    pts = [bary]
    for denom in (2, 3):
        shifted = tuple(x + Fraction(1, denom) * Fraction(gens[0][i]) for i, x in enumerate(bary))
        pts.append(shifted)
    return pts


# -- combinatorial data ---------------------------------------------------------


@dataclass(frozen=True)
class CellType:
    sigma: str
    dim: int
    slopes: tuple[tuple[int, ...], ...]
    vertices: tuple[str, ...]


def combinatorial_type(E: TropicalExpansion) -> dict[str, CellType]:
    """Per stratum: minimal cone of sigma, dimension, slope lattice, vertices."""
    out = {}
    for name in E.strata():
        K = E.slope_lattice(name)
        out[name] = CellType(
            sigma=E.sigma_of(name),
            dim=E.polyhedron_dim(name),
            slopes=tuple(K.columns),
            vertices=tuple(E.bounded_faces(name)),
        )
    return out


def fibre_type(E: TropicalExpansion, F: FibreComplex) -> dict[str, CellType]:
    """The same table as :func:`combinatorial_type`, read off a fibre.

    Everything is recomputed from the fibre's vertex coordinates and
    recession directions rather than from the cones of upsilon.
    """
    out = {}
    for name, P in F.polyhedra.items():
        pts = [F.positions[v] for v in P.vertices]
        dirs = [_primitive_rational([b - a for a, b in zip(pts[0], q)]) for q in pts[1:]]
        dirs += [list(g) for g in P.recession]
        dirs = [d for d in dirs if any(d)]
        if dirs:
            K = lattice_basis(saturation(IntMatrix.from_columns(dirs, E.n_sigma)))
        else:
            K = IntMatrix.zeros(E.n_sigma, 0)
        # minimal cone of sigma containing the polyhedron: locate a relative
        # interior point (average of vertices plus all recession directions)
        centre = [sum(c) / len(pts) for c in zip(*pts)] if pts else [Fraction(0)] * E.n_sigma
        for g in P.recession:
            centre = [c + x for c, x in zip(centre, g)]
        out[name] = CellType(
            sigma=locate(E.sigma, centre),
            dim=K.ncols,
            slopes=tuple(K.columns),
            vertices=P.vertices,
        )
    return out


def asymptotic_complex(E: TropicalExpansion) -> ConeComplex:
    """The part of upsilon over the zero face, as a complex in ``N_sigma``."""
    zero = Cone(E.n_tau, [])
    cones = {
        name: Cone(E.n_sigma, [E.sigma_part(g) for g in E.upsilon[name].generators])
        for name in E.over(zero)
    }
    return build_complex(E.n_sigma, cones)


def tube_vertices(E: TropicalExpansion) -> list[str]:
    """Fibre vertices outside the embedded 1-complex, after checking them.

    A tube vertex comes from subdividing an edge, so it must be bivalent
    with its two edge slopes equal up to sign.
    """
    if E.one_complex_vertices is None:
        raise MissingOneComplex("the expansion does not declare one_complex_vertices")
    all_vertices = E.vertices()
    unknown = sorted(set(E.one_complex_vertices) - set(all_vertices))
    if unknown:
        raise ExpansionError(f"one_complex_vertices names non-vertices: {unknown}")
    tubes = [v for v in all_vertices if v not in E.one_complex_vertices]
    for v in tubes:
        edges = E.incident_edges(v)
        if len(edges) != 2:
            raise InvalidTube(v, f"has {len(edges)} incident edges, a tube vertex needs 2")
        s1, s2 = (E.slope_lattice(e).col(0) for e in edges)
        if s1 != s2 and s1 != tuple(-x for x in s2):
            raise InvalidTube(v, f"incident slopes {list(s1)} and {list(s2)} differ")
    return tubes


def is_bivalent(E: TropicalExpansion, v: str) -> bool:
    return len(E.incident_edges(v)) == 2


def extend_base(E: TropicalExpansion, extra_rank: int = 1) -> TropicalExpansion:
    """Product of ``E`` with an orthant of unused base directions.

    The new base coordinates move no vertex, so the stacked position maps
    have a kernel along them.
    """
    n_s, n_t, k = E.n_sigma, E.n_tau, extra_rank
    total = n_s + n_t + k
    units = [tuple(int(j == n_s + n_t + i) for j in range(total)) for i in range(k)]
    cones = {}
    for name in E.upsilon.names():
        gens = [tuple(g) + (0,) * k for g in E.upsilon[name].generators]
        cones[name] = Cone(total, gens + units)
    tau = Cone(n_t + k, [tuple(g) + (0,) * k for g in E.tau.generators]
               + [u[n_s:] for u in units])
    labels = tuple(E.tau_labels) + tuple(f"e{n_t + i + 1}" for i in range(k))
    return make_expansion(
        dict(E.sigma.cones), tau, cones, tau_labels=labels, sigma_labels=E.sigma_labels,
        one_complex_vertices=E.one_complex_vertices,
    )
