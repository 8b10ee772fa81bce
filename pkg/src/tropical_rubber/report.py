"""JSON report documents for every command.

Matrices are written row-major with explicit row and column labels.
Rationals are plain integers when integral and ``{"num", "den"}`` objects
otherwise.  Key order is left to the serializer (``sort_keys``), so output
is byte-identical across runs.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from .complexes import Violation
from .document import Model, rational_json
from .expansion import (
    ExpansionReport,
    InvalidTube,
    MissingOneComplex,
    asymptotic_complex,
    combinatorial_type,
    fibre,
    sample_points,
    tube_vertices,
    validate_expansion,
)
from .linalg import IntMatrix
from .rubber import position_map, rubber_report
from .trop_maps import check_stability, validate_map


def dumps(doc, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def matrix_json(M: IntMatrix, row_labels: Optional[Sequence[str]] = None,
                col_labels: Optional[Sequence[str]] = None) -> dict:
    return {
        "rows": M.nrows,
        "cols": M.ncols,
        "row_labels": list(row_labels) if row_labels is not None else [f"r{i}" for i in range(M.nrows)],
        "col_labels": list(col_labels) if col_labels is not None else [f"c{j}" for j in range(M.ncols)],
        "entries": M.tolist(),
    }


def point_json(x) -> list:
    return [rational_json(a) for a in x]


def _witness(w):
    if w is None:
        return None
    if w and isinstance(w[0], (tuple, list)):
        return [list(r) for r in w]
    return point_json(w)


def violation_json(v: Violation) -> dict:
    return {"code": v.code, "cones": list(v.cones), "detail": v.detail, "witness": _witness(v.witness)}


def validation_json(report: ExpansionReport) -> dict:
    return {
        "valid": report.is_valid,
        "is_complete": report.is_complete,
        "violations": [violation_json(v) for v in report.violations],
        "notes": list(report.notes),
        "cone_verdicts": dict(report.cone_verdicts),
    }


def validate_doc(model: Model) -> dict:
    return {"command": "validate", "case": model.name, **validation_json(validate_expansion(model.expansion))}


def fibre_doc(model: Model, f) -> dict:
    E = model.expansion
    F = fibre(E, f)
    polyhedra = []
    for name, P in F.polyhedra.items():
        polyhedra.append({
            "name": name,
            "dim": P.dim,
            "sigma": P.sigma,
            "vertices": list(P.vertices),
            "recession": [list(g) for g in P.recession],
            "faces": list(P.faces),
            "slope": list(P.slope) if P.slope is not None else None,
            "length": rational_json(P.length) if P.length is not None else None,
        })
    return {
        "command": "fibre",
        "case": model.name,
        "base_point": point_json(F.base_point),
        "base_face": [list(g) for g in F.base_face.generators],
        "sigma_labels": list(E.sigma_labels),
        "positions": {v: point_json(x) for v, x in F.positions.items()},
        "polyhedra": polyhedra,
    }


def positions_doc(model: Model) -> dict:
    E = model.expansion
    maps = [position_map(E, v) for v in E.vertices()]
    return {
        "command": "positions",
        "case": model.name,
        "position_maps": [
            {"vertex": pm.vertex, "sigma_v": pm.sigma_v,
             "matrix": matrix_json(pm.matrix, E.sigma_labels, E.tau_labels)}
            for pm in maps
        ],
    }


def strata_doc(model: Model) -> dict:
    E = model.expansion
    table = combinatorial_type(E)
    asym = asymptotic_complex(E)
    doc = {
        "command": "strata",
        "case": model.name,
        "strata": [
            {"name": name, "dim": t.dim, "sigma_P": t.sigma,
             "slopes": [list(s) for s in t.slopes], "vertices": list(t.vertices)}
            for name, t in table.items()
        ],
        "asymptotic_complex": {
            "cones": [{"name": n, "gens": [list(g) for g in asym[n].generators]} for n in asym.names()],
        },
    }
    try:
        doc["tube_vertices"] = tube_vertices(E)
    except MissingOneComplex:
        doc["tube_vertices"] = None
    except InvalidTube as exc:
        doc["tube_vertices"] = {"error": "InvalidTube", "vertex": exc.vertex, "message": str(exc)}
    return doc


def rubber_doc(model: Model) -> dict:
    E = model.expansion
    rep = rubber_report(E)
    tau_labels = list(E.tau_labels)
    actions = []
    for P, a in rep.actions.items():
        n_theta = a.theta_P.rank
        actions.append({
            "polyhedron": P,
            "dim": a.dim,
            "sigma_P": a.sigma_P,
            "sigma_basis": matrix_json(a.sigma_basis, E.sigma_labels,
                                       [f"b{j}" for j in range(a.sigma_basis.ncols)]),
            "K_P": matrix_json(a.K_P, [f"b{j}" for j in range(a.sigma_basis.ncols)],
                               [f"k{j}" for j in range(a.K_P.ncols)]),
            "projection": matrix_json(a.projection, [f"q{i}" for i in range(n_theta)],
                                      [f"b{j}" for j in range(a.sigma_basis.ncols)]),
            "theta_P": {
                "rank": n_theta,
                "dim": a.theta_P.dim,
                "generators": [list(g) for g in a.theta_P.generators],
                "strictly_convex": a.theta_P.strictly_convex,
            },
            "phi_P": matrix_json(a.phi_P, [f"q{i}" for i in range(n_theta)], tau_labels),
            "trivial": a.is_trivial,
        })
    weights = []
    for v, w in rep.weights.items():
        entry = {"vertex": v, "matrix": matrix_json(w.matrix, E.sigma_labels, tau_labels)}
        if w.per_ray is not None:
            entry["per_ray"] = matrix_json(w.per_ray, w.ray_labels, tau_labels)
        weights.append(entry)
    return {
        "command": "rubber",
        "case": model.name,
        "rubber_torus": {"rank": rep.torus.rank, "basis_labels": list(rep.torus.basis_labels)},
        "position_maps": [
            {"vertex": v, "sigma_v": pm.sigma_v,
             "matrix": matrix_json(pm.matrix, E.sigma_labels, tau_labels)}
            for v, pm in rep.positions.items()
        ],
        "stratum_actions": actions,
        "weights": weights,
        "injectivity": {
            "holds": rep.injective,
            "witness": list(rep.injectivity_witness) if rep.injectivity_witness else None,
        },
        "trivial_strata": rep.trivial,
        "nontrivial_strata": rep.nontrivial,
        "join_divisors": [
            {"edge": e, "between": list(d["between"]), "nontrivial": d["nontrivial"]}
            for e, d in rep.join_divisors.items()
        ],
        "notes": rep.notes,
    }


def _finding_json(f) -> dict:
    return {"code": f.code, "subject": f.subject, "detail": f.detail}


def stability_doc(model: Model, map_name: str) -> dict:
    E = model.expansion
    m = model.maps[map_name]
    map_report = validate_map(E, m)
    verdict = check_stability(E, m)
    return {
        "command": "stability",
        "case": model.name,
        "map": map_name,
        "map_valid": map_report.is_valid,
        "map_violations": [_finding_json(f) for f in map_report.violations],
        "stable": verdict.stable,
        "reasons": [_finding_json(f) for f in verdict.reasons],
        "tube_vertices": verdict.tube_vertices,
        "met_strata": verdict.met,
        "assumptions": list(verdict.assumptions),
    }


def case_doc(model: Model) -> dict:
    """Everything the corpus regression compares for one input."""
    E = model.expansion
    f = model.sample_point if model.sample_point is not None else sample_points(E)[0]
    doc = {
        "case": model.name,
        "validate": validate_doc(model),
        "rubber": rubber_doc(model),
        "strata": strata_doc(model),
        "fibre": fibre_doc(model, f),
        "stability": {name: stability_doc(model, name) for name in sorted(model.maps)},
    }
    for part in ("validate", "rubber", "strata", "fibre"):
        doc[part].pop("case")
        doc[part].pop("command")
    for part in doc["stability"].values():
        part.pop("case")
        part.pop("command")
    return doc
