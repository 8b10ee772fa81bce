"""Rational polyhedral cones with integral structure.

Cones need not be strictly convex.  A cone is stored by generators in an
ambient lattice ``Z^n``; its facet description is computed once at
construction by Fourier-Motzkin elimination.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .linalg import (
    IntMatrix,
    LinalgError,
    kernel_basis,
    lattice_basis,
    primitive,
    rank,
    right_inverse,
    saturation,
    solve_integral,
)

RationalPoint = tuple  # tuple of Fraction


def as_point(coords: Iterable) -> RationalPoint:
    return tuple(Fraction(c) for c in coords)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _fm_facets(gens: list[tuple[int, ...]], d: int) -> list[tuple[int, ...]]:
    """Facet normals of a full-dimensional cone in ``R^d`` spanned by ``gens``.

    The cone is the projection to ``z`` of ``{(z, lam) : z = G lam, lam >= 0}``.
    ``d`` of the multipliers are solved for through a basis of columns of
    ``G``; the rest are removed one at a time by Fourier-Motzkin, pruning with
    Chernikov's rule.  Surviving rows are then filtered exactly: a row is a
    facet iff the generators on its hyperplane span a hyperplane.
    """
    k = len(gens)
    G = IntMatrix.from_columns(gens, d)
    # pick a column basis greedily
    basis: list[int] = []
    for j in range(k):
        if rank(G.select_cols(basis + [j])) == len(basis) + 1:
            basis.append(j)
        if len(basis) == d:
            break
    nonbasis = [j for j in range(k) if j not in basis]
    Binv = _inverse(G.select_cols(basis))
    # Rows are (coefficients on z, coefficients on lam_nonbasis), meaning
    # row . (z, lam_N) >= 0.  lam_B = Binv z - Binv N lam_N >= 0.
    N = G.select_cols(nonbasis)
    BinvN = [[sum(Binv[i][t] * N[t, j] for t in range(d)) for j in range(len(nonbasis))] for i in range(d)]
    rows = []
    for i in range(d):
        rows.append((_int_row(list(Binv[i]) + [-x for x in BinvN[i]]), frozenset([i])))
    for j in range(len(nonbasis)):
        r = [0] * (d + len(nonbasis))
        r[d + j] = 1
        rows.append((tuple(r), frozenset([d + j])))
    eliminated = 0
    for j in range(len(nonbasis)):
        col = d + j
        pos = [r for r in rows if r[0][col] > 0]
        neg = [r for r in rows if r[0][col] < 0]
        keep = [r for r in rows if r[0][col] == 0]
        eliminated += 1
        for (a, ha), (b, hb) in ((p, n) for p in pos for n in neg):
            hist = ha | hb
            # Chernikov: a new row depending on more than (eliminated + 1)
            # original rows is redundant.
            if len(hist) > eliminated + 1:
                continue
            ca, cb = a[col], -b[col]
            new = _int_row([cb * x + ca * y for x, y in zip(a, b)])
            if any(new):
                keep.append((new, hist))
        seen = {}
        for r, h in keep:
            if r not in seen or len(h) < len(seen[r]):
                seen[r] = h
        rows = list(seen.items())
    candidates = {primitive(r[:d]) for r, _ in rows if any(r[:d])}
    facets = []
    for a in sorted(candidates):
        on = [g for g in gens if _dot(a, g) == 0]
        assert all(_dot(a, g) >= 0 for g in gens)
        if on and rank(IntMatrix.from_columns(on, d)) == d - 1:
            facets.append(a)
        elif not on and d == 1:
            facets.append(a)
    return facets


def _int_row(row: Sequence) -> tuple[int, ...]:
    den = 1
    for x in row:
        q = Fraction(x).denominator
        den = den * q // _gcd(den, q)
    return primitive([int(Fraction(x) * den) for x in row])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _inverse(M: IntMatrix) -> list[list[Fraction]]:
    n = M.nrows
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.rows)]
    for j in range(n):
        p = next(i for i in range(j, n) if A[i][j] != 0)
        A[j], A[p] = A[p], A[j]
        inv = 1 / A[j][j]
        A[j] = [x * inv for x in A[j]]
        for i in range(n):
            if i != j and A[i][j]:
                f = A[i][j]
                A[i] = [x - f * y for x, y in zip(A[i], A[j])]
    return [row[n:] for row in A]


class Cone:
    """A rational polyhedral cone ``(sigma, N_sigma)`` inside ``Z^ambient_rank``.

    ``lattice`` is the integral structure ``N_sigma`` as a basis of columns;
    by default it is the saturated lattice ``span(sigma) ∩ Z^n``.  An explicit
    lattice lets callers describe cones whose integral points form a
    non-saturated sublattice.
    """

    def __init__(
        self,
        ambient_rank: int,
        generators: Iterable[Sequence[int]],
        lattice: Optional[IntMatrix] = None,
    ):
        self.ambient_rank = n = ambient_rank
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if len(g) != n:
                raise ValueError(f"generator {g} does not have length {n}")
            if any(g):
                gens.append(primitive(g))
        gens = sorted(set(gens))
        span = saturation(IntMatrix.from_columns(gens, n)) if gens else IntMatrix.zeros(n, 0)
        self.span_basis = span
        self.dim = d = span.ncols
        if lattice is None:
            self.lattice = span
        else:
            if lattice.nrows != n or rank(lattice) != d or (
                d and rank(span.hstack(lattice)) != d
            ):
                raise ValueError("explicit lattice must span the linear span of the cone")
            self.lattice = lattice_basis(lattice) if lattice.ncols else lattice
        # coordinates of generators in the canonical span basis
        if d:
            left = right_inverse(span.T).T  # left @ span == I
            local = [left.apply(g) for g in gens]
            local_facets = _fm_facets(local, d)
        else:
            left = IntMatrix.zeros(0, n)
            local_facets = []
        self._left = left
        self.local_facets = tuple(local_facets)
        # lineality: points of the span where every facet functional vanishes
        if local_facets:
            F = IntMatrix(local_facets, ncols=d)
            lin_local = kernel_basis(F)
        else:
            lin_local = IntMatrix.identity(d)
        lin = span @ lin_local if d else IntMatrix.zeros(n, 0)
        self.lineality_basis = lattice_basis(lin) if lin.ncols else lin
        self.lineality_rank = self.lineality_basis.ncols
        self.generators = self._reduce_generators(gens)

    def _reduce_generators(self, gens):
        lin = [tuple(c) for c in self.lineality_basis.columns]
        out = set(lin) | {tuple(-x for x in c) for c in lin}
        if self.dim == self.lineality_rank:
            return tuple(sorted(out))
        # extreme rays modulo lineality: the facets through the generator cut
        # out a face of dimension lineality_rank + 1
        target = self.lineality_rank + 1
        rays = {}
        for g in gens:
            gl = self._left.apply(g)
            tight = [a for a in self.local_facets if _dot(a, gl) == 0]
            if len(tight) == len(self.local_facets):
                continue  # inside the lineality space
            if tight:
                face_dim = self.dim - rank(IntMatrix(tight, ncols=self.dim))
            else:
                face_dim = self.dim
            if face_dim != target:
                continue
            key = tuple(sorted(tight))
            if key not in rays or g < rays[key]:
                rays[key] = g
        return tuple(sorted(out | set(rays.values())))

    # -- descriptions ---------------------------------------------------

    def _ambient_normal(self, a: Sequence[int]) -> tuple[int, ...]:
        return (IntMatrix([a], ncols=self.dim) @ self._left).rows[0]

    @property
    def generator_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.generators, self.ambient_rank)

    @cached_property
    def equations(self) -> IntMatrix:
        """Columns spanning the integer annihilator of the linear span."""
        if self.dim == 0:
            return IntMatrix.identity(self.ambient_rank)
        return kernel_basis(self.span_basis.T)

    @cached_property
    def facet_normals(self) -> IntMatrix:
        """Primitive normals ``n`` with ``x in cone <=> <n, x> >= 0`` for all ``n``.

        Equations of the span appear as a pair ``+e, -e``.
        """
        normals = set()
        for a in self.local_facets:
            normals.add(primitive(self._ambient_normal(a)))
        for e in self.equations.columns:
            normals.add(tuple(e))
            normals.add(tuple(-x for x in e))
        return IntMatrix.from_columns(sorted(normals), self.ambient_rank)

    @cached_property
    def key(self) -> tuple:
        """Canonical key: equal keys iff equal cones (as sets)."""
        return (self.ambient_rank, self.span_basis, tuple(sorted(self.local_facets)))

    @property
    def is_strictly_convex(self) -> bool:
        return self.lineality_rank == 0

    @property
    def is_simplicial(self) -> bool:
        return self.is_strictly_convex and len(self.generators) == self.dim

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def relative_interior_point(self) -> tuple[int, ...]:
        pt = [0] * self.ambient_rank
        for g in self.generators:
            pt = [a + b for a, b in zip(pt, g)]
        return tuple(pt)

    def contains(self, x: Sequence) -> bool:
        return contains_point(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Cone({self.ambient_rank}, {list(map(list, self.generators))})"


def cone_from_generators(ambient_rank: int, generators: Iterable[Sequence[int]]) -> Cone:
    return Cone(ambient_rank, generators)


def zero_cone(ambient_rank: int) -> Cone:
    return Cone(ambient_rank, [])


def dual_description(cone: Cone) -> IntMatrix:
    return cone.facet_normals


def dual_cone(cone: Cone) -> Cone:
    """The dual cone, in the dual lattice (identified with ``Z^n``)."""
    return Cone(cone.ambient_rank, cone.facet_normals.columns)


def contains_point(cone: Cone, x: Sequence) -> bool:
    if len(x) != cone.ambient_rank:
        raise ValueError("point has the wrong length")
    return all(_dot(n, x) >= 0 for n in cone.facet_normals.columns)


def in_relative_interior(cone: Cone, x: Sequence) -> bool:
    """Membership in the relative interior: every proper facet is strict."""
    if not contains_point(cone, x):
        return False
    for a in cone.local_facets:
        if _dot(cone._ambient_normal(a), x) == 0:
            return False
    return True


def intersect(c1: Cone, c2: Cone) -> Cone:
    if c1.ambient_rank != c2.ambient_rank:
        raise ValueError("cones live in different lattices")
    n = c1.ambient_rank
    # (c1 ∩ c2)^vee = c1^vee + c2^vee
    dual_sum = Cone(n, list(c1.facet_normals.columns) + list(c2.facet_normals.columns))
    return Cone(n, dual_sum.facet_normals.columns)


def halfspace_intersection(ambient_rank: int, normals: Iterable[Sequence[int]]) -> Cone:
    """The cone ``{x : <n, x> >= 0 for all n}``."""
    normals = list(normals)
    if not normals:
        return Cone(ambient_rank, [u for i in range(ambient_rank) for u in _pm_unit(ambient_rank, i)])
    return dual_cone(Cone(ambient_rank, normals))


def _pm_unit(n: int, i: int):
    e = [0] * n
    e[i] = 1
    yield tuple(e)
    e[i] = -1
    yield tuple(e)


def faces(c: Cone) -> list[Cone]:
    """All faces of ``c``, each once, ordered by ``(dim, key)``.

    Cones are immutable, so the list is computed once and cached on ``c``.
    """
    cached = c.__dict__.get("_faces")
    if cached is not None:
        return list(cached)
    found = {c.key: c}
    seen = {frozenset(c.generators)}
    frontier = [c]
    normals = [c._ambient_normal(a) for a in c.local_facets]
    while frontier:
        nxt = []
        for f in frontier:
            for a in normals:
                vals = [_dot(a, g) for g in f.generators]
                if all(v == 0 for v in vals):
                    continue
                on = [g for g, v in zip(f.generators, vals) if v == 0]
                if frozenset(on) in seen:
                    continue
                seen.add(frozenset(on))
                sub = Cone(c.ambient_rank, on, lattice=_restrict_lattice(c, on))
                if sub.key not in found:
                    found[sub.key] = sub
                    nxt.append(sub)
        frontier = nxt
    c._faces = tuple(sorted(found.values(), key=lambda f: (f.dim, _sort_key(f))))
    return list(c._faces)


def _restrict_lattice(c: Cone, gens) -> Optional[IntMatrix]:
    """``N_c`` intersected with the span of ``gens`` (None for the default lattice)."""
    if c.lattice == c.span_basis:
        return None
    n = c.ambient_rank
    span = saturation(IntMatrix.from_columns(gens, n)) if gens else IntMatrix.zeros(n, 0)
    if span.ncols == 0:
        return IntMatrix.zeros(n, 0)
    eqs = kernel_basis(span.T)
    if eqs.ncols == 0:
        return c.lattice
    coeffs = kernel_basis(eqs.T @ c.lattice)
    return c.lattice @ coeffs


def _sort_key(c: Cone) -> tuple:
    return (c.dim, c.generators)


def is_face(f: Cone, c: Cone) -> bool:
    if f.ambient_rank != c.ambient_rank:
        raise ValueError("cones live in different lattices")
    return any(f.key == g.key for g in faces(c))


def sort_key(c: Cone) -> tuple:
    """Deterministic ordering key used across reports."""
    return _sort_key(c)


def lattice_of_image(matrix: IntMatrix, cone: Cone) -> IntMatrix:
    """Canonical basis of the image of ``N_cone`` under ``matrix``."""
    img = matrix @ cone.lattice
    return lattice_basis(img) if img.ncols else img


def express_in_basis(basis: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    x = solve_integral(basis, v)
    if x is None:
        raise LinalgError(f"{tuple(v)} is not in the lattice spanned by {basis!r}")
    return x
