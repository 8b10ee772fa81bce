"""Exact lattice computations for tropical expansions and their rubber actions."""

from .complexes import ConeComplex, build_complex, validate_subdivision
from .cones import Cone, cone_from_generators
from .document import InputError, Model, build_model, load_input, to_document
from .expansion import (
    TropicalExpansion,
    asymptotic_complex,
    combinatorial_type,
    fibre,
    make_expansion,
    tube_vertices,
    validate_expansion,
)
from .linalg import IntMatrix
from .rubber import position_map, rubber_report, stratum_action
from .trop_maps import TropicalMap, check_stability, tube_along, validate_map

__all__ = [
    "Cone", "ConeComplex", "IntMatrix", "InputError", "Model", "TropicalExpansion", "TropicalMap",
    "asymptotic_complex", "build_complex", "build_model", "check_stability", "combinatorial_type",
    "cone_from_generators", "fibre", "load_input", "make_expansion", "position_map",
    "rubber_report", "stratum_action", "to_document", "tube_along", "tube_vertices",
    "validate_expansion", "validate_map", "validate_subdivision",
]
