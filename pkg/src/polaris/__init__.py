"""Finite classical polar spaces over small fields, the opposition diagrams
of their collineations, explicit automorphism constructions, and exhaustive
verification sweeps at desk scale.
"""

from .backend import BACKEND_NAME, available_backends
from .collineation import (
    Collineation,
    as_collineation,
    is_homology_pattern,
    point_permutation,
    similitude_factor,
)
from .constructors import (
    SearchExhausted,
    baer_involution,
    central_elation,
    elliptic_ffi,
    generic_unipotent,
    hermitian_ffi,
    homology_B,
    homology_C,
    hyperbolic_ffi,
    is_central_elation,
    root_elation,
    space_for_family,
    symplectic_ffi,
    torus_element,
)
from .diagrams import OppDiagram, catalog, parse_symbol
from .engine import (
    OppositionResult,
    chamber_distance_matrix,
    chamber_list,
    chambers_opposite,
    fixed_line_geometry,
    fixed_set_corank,
    opposition_diagram,
    subfield_fixed_report,
)
from .gf import GF
from .roots import RootSystem
from .spaces import (
    PolarSpace,
    elliptic_space,
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)
from .sweep import SweepReport, run_sweep
from .verify import SUITES, run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "available_backends",
    "Collineation",
    "as_collineation",
    "is_homology_pattern",
    "point_permutation",
    "similitude_factor",
    "SearchExhausted",
    "baer_involution",
    "central_elation",
    "elliptic_ffi",
    "generic_unipotent",
    "hermitian_ffi",
    "homology_B",
    "homology_C",
    "hyperbolic_ffi",
    "is_central_elation",
    "root_elation",
    "space_for_family",
    "symplectic_ffi",
    "torus_element",
    "OppDiagram",
    "catalog",
    "parse_symbol",
    "OppositionResult",
    "chamber_distance_matrix",
    "chamber_list",
    "chambers_opposite",
    "fixed_line_geometry",
    "fixed_set_corank",
    "opposition_diagram",
    "subfield_fixed_report",
    "GF",
    "RootSystem",
    "PolarSpace",
    "elliptic_space",
    "hermitian_space",
    "hyperbolic_space",
    "parabolic_space",
    "symplectic_space",
    "SweepReport",
    "run_sweep",
    "SUITES",
    "run_all",
    "run_suite",
]
