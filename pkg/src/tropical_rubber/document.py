"""Reading and writing the JSON input format.

Only integers are accepted.  Rationals are written as ``{"num": a, "den": b}``
objects, and any float literal in the input is reported as a schema error
at its key path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from jsonschema import Draft202012Validator

from .complexes import ComplexError, ImproperIntersection
from .cones import Cone
from .expansion import ExpansionReport, TropicalExpansion, make_expansion, validate_expansion
from .linalg import IntMatrix
from .trop_maps import Leg, MapEdge, MapVertex, TropicalMap


class InputError(Exception):
    """Base class for problems with an input document."""

    kind = "InputError"
    exit_status = 2

    def __init__(self, message: str, key: str = "", detail: Any = None):
        super().__init__(message)
        self.message = message
        self.key = key
        self.detail = detail

    def diagnostic(self) -> dict:
        out = {"type": self.kind, "message": self.message, "key": self.key}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


class ParseError(InputError):
    kind = "ParseError"


class SchemaError(InputError):
    kind = "SchemaError"


class ValidationError(InputError):
    kind = "ValidationError"
    exit_status = 1

    def __init__(self, message: str, key: str = "", detail: Any = None,
                 report: Optional[ExpansionReport] = None):
        super().__init__(message, key, detail)
        self.report = report


class NonIntegerLiteral:
    """Stand-in for a float or NaN literal so the schema can locate it."""

    def __init__(self, text: str):
        self.text = text

    def __repr__(self) -> str:
        return f"non-integer literal {self.text}"


def parse_json(text: str) -> Any:
    try:
        return json.loads(text, parse_float=NonIntegerLiteral, parse_constant=NonIntegerLiteral)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("tropical_rubber").joinpath("schema/input.schema.json").read_text()
    return json.loads(text)


def _key(path) -> str:
    return ".".join(str(p) for p in path)


def check_schema(doc: Any) -> None:
    validator = Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.path)), e.message))
    if errors:
        first = errors[0]
        raise SchemaError(first.message, key=_key(first.absolute_path),
                          detail=[{"key": _key(e.absolute_path), "message": e.message} for e in errors[:20]])


def rational(value: Union[int, dict]) -> Fraction:
    if isinstance(value, dict):
        return Fraction(value["num"], value["den"])
    return Fraction(value)


def rational_json(x: Fraction) -> Union[int, dict]:
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return {"num": x.numerator, "den": x.denominator}


@dataclass
class Model:
    name: str
    expansion: TropicalExpansion
    maps: dict = field(default_factory=dict)
    sample_point: Optional[tuple] = None
    document: Optional[dict] = None


def _cone(doc: dict, rank: int, key: str) -> Cone:
    for i, g in enumerate(doc["gens"]):
        if len(g) != rank:
            raise SchemaError(f"generator has length {len(g)}, expected {rank}", key=f"{key}.gens.{i}")
    lattice = None
    if "lattice" in doc:
        cols = doc["lattice"]
        for i, g in enumerate(cols):
            if len(g) != rank:
                raise SchemaError(f"lattice vector has length {len(g)}, expected {rank}",
                                  key=f"{key}.lattice.{i}")
        lattice = IntMatrix.from_columns(cols, rank)
    try:
        return Cone(rank, doc["gens"], lattice=lattice)
    except ValueError as exc:
        raise SchemaError(str(exc), key=key) from None


def _map(doc: dict, key: str, n_sigma: int, n_tau: int) -> TropicalMap:
    base = tuple(rational(x) for x in doc["base_point"])
    if len(base) != n_tau:
        raise SchemaError(f"base point has length {len(base)}, expected {n_tau}", key=f"{key}.base_point")
    vertices = {}
    for i, v in enumerate(doc["vertices"]):
        pos = tuple(rational(x) for x in v["position"])
        if len(pos) != n_sigma:
            raise SchemaError("position has the wrong length", key=f"{key}.vertices.{i}.position")
        if v["name"] in vertices:
            raise SchemaError(f"duplicate map-vertex {v['name']!r}", key=f"{key}.vertices.{i}.name")
        vertices[v["name"]] = MapVertex(
            name=v["name"], target=v["target"], position=pos,
            genus=v.get("genus", 0), marks=v.get("marks", 0),
            geometrically_stable=v.get("geometrically_stable", False),
        )
    edges = []
    for i, e in enumerate(doc["edges"]):
        if len(e["slope"]) != n_sigma:
            raise SchemaError("slope has the wrong length", key=f"{key}.edges.{i}.slope")
        edges.append(MapEdge(
            name=e["name"], source=e["source"], target=e.get("target"),
            slope=tuple(e["slope"]),
            length=rational(e["length"]) if "length" in e else None,
        ))
    legs = []
    for i, leg in enumerate(doc.get("legs", [])):
        slope = tuple(leg.get("slope", [0] * n_sigma))
        if len(slope) != n_sigma:
            raise SchemaError("slope has the wrong length", key=f"{key}.legs.{i}.slope")
        legs.append(Leg(name=leg["name"], vertex=leg["vertex"], slope=slope))
    return TropicalMap(name=doc["name"], base_point=base, vertices=vertices, edges=edges, legs=legs)


def build_model(doc: Any, require_valid: bool = True) -> Model:
    """Turn a parsed document into a model.

    With ``require_valid`` the expansion axioms are checked and a
    :class:`ValidationError` carrying the report is raised on failure.
    """
    check_schema(doc)
    n_s = doc["sigma"]["rank"]
    n_t = doc["tau"]["rank"]
    sigma_cones = {}
    for i, c in enumerate(doc["sigma"]["cones"]):
        if c["name"] in sigma_cones:
            raise SchemaError(f"duplicate cone name {c['name']!r}", key=f"sigma.cones.{i}.name")
        sigma_cones[c["name"]] = _cone(c, n_s, f"sigma.cones.{i}")
    tau = _cone({"gens": doc["tau"]["gens"]}, n_t, "tau")
    ups = {}
    for i, c in enumerate(doc["upsilon"]["cones"]):
        if c["name"] in ups:
            raise SchemaError(f"duplicate cone name {c['name']!r}", key=f"upsilon.cones.{i}.name")
        ups[c["name"]] = _cone(c, n_s + n_t, f"upsilon.cones.{i}")
    for field_name, labels, n in (("sigma", doc["sigma"].get("labels"), n_s),
                                  ("tau", doc["tau"].get("labels"), n_t)):
        if labels is not None and len(labels) != n:
            raise SchemaError(f"expected {n} labels", key=f"{field_name}.labels")
    if tau.dim != n_t:
        raise ValidationError("the base cone must be full-dimensional", key="tau.gens")
    try:
        E = make_expansion(
            sigma_cones, tau, ups,
            tau_labels=doc["tau"].get("labels", ()),
            sigma_labels=doc["sigma"].get("labels", ()),
            one_complex_vertices=doc.get("one_complex_vertices"),
            sigma_rank=n_s,
        )
    except ImproperIntersection as exc:
        which = "upsilon" if exc.cones[0] in ups or exc.cones[1] in ups else "sigma"
        raise ValidationError(
            str(exc), key=which,
            detail={"code": "IMPROPER_INTERSECTION", "cones": list(exc.cones),
                    "witness": list(exc.witness)},
        ) from None
    except ComplexError as exc:
        raise ValidationError(str(exc), key="upsilon") from None
    if E.one_complex_vertices is not None:
        unknown = sorted(set(E.one_complex_vertices) - set(E.upsilon.cones))
        if unknown:
            raise SchemaError(f"unknown vertices {unknown}", key="one_complex_vertices")
    if require_valid:
        report = validate_expansion(E)
        if not report.is_valid:
            raise ValidationError("input is not a valid tropical expansion", key="upsilon", report=report)
    maps = {}
    for i, m in enumerate(doc.get("maps", [])):
        if m["name"] in maps:
            raise SchemaError(f"duplicate map name {m['name']!r}", key=f"maps.{i}.name")
        maps[m["name"]] = _map(m, f"maps.{i}", n_s, n_t)
    sample = None
    if "sample_point" in doc:
        sample = tuple(rational(x) for x in doc["sample_point"])
        if len(sample) != n_t:
            raise SchemaError("sample point has the wrong length", key="sample_point")
    return Model(name=doc.get("name", ""), expansion=E, maps=maps, sample_point=sample, document=doc)


def load_input(path: Union[str, Path], require_valid: bool = True) -> Model:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    doc = parse_json(text)
    model = build_model(doc, require_valid=require_valid)
    if not model.name:
        model.name = Path(path).stem
    return model


# -- writing ------------------------------------------------------------------


def _cone_json(name: str, c: Cone) -> dict:
    out = {"name": name, "gens": [list(g) for g in c.generators]}
    if c.lattice != c.span_basis:
        out["lattice"] = [list(col) for col in c.lattice.columns]
    return out


def _map_json(m: TropicalMap) -> dict:
    out = {
        "name": m.name,
        "base_point": [rational_json(x) for x in m.base_point],
        "vertices": [
            {
                "name": v.name, "target": v.target,
                "position": [rational_json(x) for x in v.position],
                "genus": v.genus, "marks": v.marks,
                "geometrically_stable": v.geometrically_stable,
            }
            for v in (m.vertices[k] for k in sorted(m.vertices))
        ],
        "edges": [],
    }
    for e in m.edges:
        ed = {"name": e.name, "source": e.source, "slope": list(e.slope)}
        if e.target is not None:
            ed["target"] = e.target
        if e.length is not None:
            ed["length"] = rational_json(e.length)
        out["edges"].append(ed)
    if m.legs:
        out["legs"] = [{"name": l.name, "vertex": l.vertex, "slope": list(l.slope)} for l in m.legs]
    return out


def to_document(model: Model) -> dict:
    """Canonical document for ``model``, including all face cones.

    Loading the result gives back an identical model.
    """
    E = model.expansion
    doc = {
        "name": model.name,
        "sigma": {
            "rank": E.n_sigma,
            "labels": list(E.sigma_labels),
            "cones": [_cone_json(n, E.sigma[n]) for n in E.sigma.names()],
        },
        "tau": {
            "rank": E.n_tau,
            "labels": list(E.tau_labels),
            "gens": [list(g) for g in E.tau.generators],
        },
        "upsilon": {"cones": [_cone_json(n, E.upsilon[n]) for n in E.upsilon.names()]},
    }
    if E.one_complex_vertices is not None:
        doc["one_complex_vertices"] = sorted(E.one_complex_vertices)
    if model.maps:
        doc["maps"] = [_map_json(model.maps[k]) for k in sorted(model.maps)]
    if model.sample_point is not None:
        doc["sample_point"] = [rational_json(x) for x in model.sample_point]
    return doc
