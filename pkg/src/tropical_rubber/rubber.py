"""Rubber torus data of a tropical expansion.

Everything here is a lattice map out of ``N_tau``: the position of each
fibre vertex as a function of the base point, and for every stratum the
induced map into the quotient of ``N_sigma_P`` by the directions spanned
inside the polyhedron.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cones import Cone, contains_point
from .expansion import ExpansionError, TropicalExpansion
from .linalg import (
    IntMatrix,
    LinalgError,
    determinant,
    kernel_basis,
    quotient_by,
    right_inverse,
    solve_integral,
)

NOT_STRICTLY_CONVEX_NOTE = (
    "quotient cone of {name} is not strictly convex: the image of sigma_P in "
    "N_sigma_P / K_P contains a line"
)


class NotAVertexCone(ExpansionError):
    pass


class NotAStratum(ExpansionError):
    pass


@dataclass(frozen=True)
class RubberTorus:
    rank: int
    basis_labels: tuple[str, ...]


@dataclass(frozen=True)
class PositionMap:
    vertex: str
    sigma_v: str
    matrix: IntMatrix  # n_sigma x n_tau, ambient coordinates of N_sigma


@dataclass(frozen=True)
class QuotientCone:
    rank: int
    generators: tuple[tuple[int, ...], ...]
    dim: int
    strictly_convex: bool


@dataclass(frozen=True)
class StratumAction:
    polyhedron: str
    dim: int
    sigma_P: str
    sigma_basis: IntMatrix  # basis of N_sigma_P inside N_sigma
    K_P: IntMatrix  # basis of K_P in coordinates of sigma_basis
    projection: IntMatrix  # N_sigma_P -> N_theta_P
    theta_P: QuotientCone
    phi_P: IntMatrix  # n_theta x n_tau

    @property
    def is_trivial(self) -> bool:
        return self.phi_P.is_zero()


def rubber_torus(E: TropicalExpansion) -> RubberTorus:
    return RubberTorus(rank=E.n_tau, basis_labels=tuple(E.tau_labels))


def _section(E: TropicalExpansion, name: str) -> tuple[IntMatrix, IntMatrix]:
    """Lattice basis ``B`` of the cone and the matrix ``p B``."""
    B = E.upsilon[name].lattice
    return B, E.p @ B


def position_map(E: TropicalExpansion, v: str) -> PositionMap:
    """The linear map recording where vertex ``v`` sits over each base point."""
    if v not in E.upsilon:
        raise NotAVertexCone(f"unknown cone {v!r}")
    B, pB = _section(E, v)
    if pB.nrows != pB.ncols or determinant(pB) not in (1, -1):
        raise NotAVertexCone(f"{v} does not map isomorphically onto the base lattice")
    if E.image(v).key != E.tau.key:
        raise NotAVertexCone(f"{v} does not map onto the base cone")
    matrix = E.r @ B @ right_inverse(pB)
    sigma_v = E.sigma_of(v)
    target = E.sigma[sigma_v]
    for g in E.tau.generators:
        assert contains_point(target, matrix.apply(g)), "position map leaves sigma_v"
    return PositionMap(vertex=v, sigma_v=sigma_v, matrix=matrix)


def _coordinates(basis: IntMatrix, M: IntMatrix) -> IntMatrix:
    """Solve ``basis @ X = M`` over the integers, column by column."""
    cols = []
    for c in M.columns:
        x = solve_integral(basis, c)
        if x is None:
            raise LinalgError(f"{c} is not in the lattice spanned by {basis!r}")
        cols.append(x)
    return IntMatrix.from_columns(cols, basis.ncols)


def stratum_action(E: TropicalExpansion, P: str, section: Optional[IntMatrix] = None) -> StratumAction:
    """The data of the rubber action on the stratum indexed by ``P``.

    ``section`` may be any integer right inverse of ``p`` restricted to the
    lattice of the cone; by default a deterministic one is used.  The result
    does not depend on this choice.
    """
    if P not in E.upsilon:
        raise NotAStratum(f"unknown cone {P!r}")
    if E.image(P).key != E.tau.key:
        raise NotAStratum(f"{P} does not map onto the base cone")
    B, pB = _section(E, P)
    if section is None:
        section = right_inverse(pB)
    elif not (pB @ section) == IntMatrix.identity(E.n_tau):
        raise LinalgError("section is not a right inverse of p on this cone")
    sigma_P = E.sigma_of(P)
    C = E.sigma[sigma_P].lattice
    ker = kernel_basis(pB)
    K_amb = E.r @ B @ ker if ker.ncols else IntMatrix.zeros(E.n_sigma, 0)
    K = _coordinates(C, K_amb) if K_amb.ncols else IntMatrix.zeros(C.ncols, 0)
    quotient = quotient_by(K, C.ncols)
    Q = quotient.projection
    lift = _coordinates(C, E.r @ B @ section) if E.n_tau else IntMatrix.zeros(C.ncols, 0)
    phi = Q @ lift if E.n_tau else IntMatrix.zeros(quotient.quotient_rank, 0)
    sigma_local = _coordinates(C, E.sigma[sigma_P].generator_matrix) if C.ncols else None
    gens = [tuple(Q.apply(g)) for g in sigma_local.columns] if sigma_local is not None else []
    theta = Cone(quotient.quotient_rank, gens)
    return StratumAction(
        polyhedron=P,
        dim=E.polyhedron_dim(P),
        sigma_P=sigma_P,
        sigma_basis=C,
        K_P=K,
        projection=Q,
        theta_P=QuotientCone(
            rank=quotient.quotient_rank,
            generators=tuple(theta.generators),
            dim=theta.dim,
            strictly_convex=theta.is_strictly_convex,
        ),
        phi_P=phi,
    )


@dataclass(frozen=True)
class Weights:
    vertex: str
    matrix: IntMatrix
    ray_labels: Optional[tuple[str, ...]]
    per_ray: Optional[IntMatrix]


def _ray_label(E: TropicalExpansion, ray: tuple[int, ...]) -> str:
    nonzero = [i for i, x in enumerate(ray) if x]
    if len(nonzero) == 1 and ray[nonzero[0]] == 1:
        return E.sigma_labels[nonzero[0]]
    return "(" + ",".join(str(x) for x in ray) + ")"


def rubber_weights(E: TropicalExpansion, v: str) -> Weights:
    """Weights of the rubber torus on the component of vertex ``v``.

    The matrix is the position map itself.  When ``sigma_v`` is simplicial
    with rays forming a lattice basis, it is also rewritten in the ray
    basis so each row is the weight along one ray.
    """
    pm = position_map(E, v)
    cone = E.sigma[pm.sigma_v]
    rays = cone.generators
    per_ray = labels = None
    if cone.is_simplicial:
        R = IntMatrix.from_columns(rays, E.n_sigma) if rays else IntMatrix.zeros(E.n_sigma, 0)
        if not rays or _is_basis_of(R, cone.lattice):
            per_ray = _coordinates(R, pm.matrix) if rays else IntMatrix.zeros(0, E.n_tau)
            labels = tuple(_ray_label(E, r) for r in rays)
    return Weights(vertex=v, matrix=pm.matrix, ray_labels=labels, per_ray=per_ray)


def _is_basis_of(R: IntMatrix, lattice: IntMatrix) -> bool:
    if R.ncols != lattice.ncols:
        return False
    return all(solve_integral(R, c) is not None for c in lattice.columns)


def product_injectivity(E: TropicalExpansion) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Whether the vertex position maps are jointly injective on ``N_tau``."""
    rows: list[tuple[int, ...]] = []
    for v in E.vertices():
        rows.extend(position_map(E, v).matrix.rows)
    stacked = IntMatrix(rows, ncols=E.n_tau)
    ker = kernel_basis(stacked)
    if ker.ncols == 0:
        return True, None
    return False, ker.col(0)


def join_divisors(E: TropicalExpansion) -> list[str]:
    """Bounded edges of the fibre, each joining two vertex components."""
    return [e for e in E.strata()
            if E.polyhedron_dim(e) == 1 and len(E.bounded_faces(e)) == 2]


@dataclass
class RubberReport:
    torus: RubberTorus
    positions: dict
    actions: dict
    weights: dict
    injective: bool
    injectivity_witness: Optional[tuple[int, ...]]
    trivial: list
    nontrivial: list
    join_divisors: dict
    notes: list


def rubber_report(E: TropicalExpansion) -> RubberReport:
    positions = {v: position_map(E, v) for v in E.vertices()}
    actions = {P: stratum_action(E, P) for P in E.strata()}
    weights = {v: rubber_weights(E, v) for v in E.vertices()}
    holds, witness = product_injectivity(E)
    trivial = [P for P, a in actions.items() if a.is_trivial]
    nontrivial = [P for P, a in actions.items() if not a.is_trivial]
    joins = {}
    for e in join_divisors(E):
        a, b = E.bounded_faces(e)
        joins[e] = {"between": (a, b), "nontrivial": not actions[e].is_trivial}
    notes = [
        NOT_STRICTLY_CONVEX_NOTE.format(name=P)
        for P, a in actions.items() if not a.theta_P.strictly_convex
    ]
    return RubberReport(
        torus=rubber_torus(E),
        positions=positions,
        actions=actions,
        weights=weights,
        injective=holds,
        injectivity_witness=witness,
        trivial=trivial,
        nontrivial=nontrivial,
        join_divisors=joins,
        notes=notes,
    )
