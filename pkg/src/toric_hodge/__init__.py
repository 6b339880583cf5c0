"""Exact stringy Hodge numbers of Calabi-Yau hypersurfaces and complete
intersections in toric varieties."""
from .errors import (
    ConsistencyError,
    HodgeError,
    ParseError,
    ValidationError,
)
from .nef import (
    CayleyPair,
    NefPartition,
    cayley,
    dual_nef_parts,
    hypersurface_pair,
    is_indecomposable,
    validate_nef_partition,
)
from .polytope import Polytope, convex_hull, hull, is_reflexive, minkowski_sum, polar
from .stringy import (
    HodgeDiamond,
    TermBreakdown,
    ample_case_hodge,
    auxiliary_hodge,
    consistency_relations,
    e_poly,
    h11_ci_generic,
    h11_ci_indecomposable,
    h11_hypersurface,
    h21_ci,
    hodge_diamond,
    hodge_from_e,
    is_minkowski_summand,
)

__all__ = [
    "ConsistencyError",
    "HodgeError",
    "ParseError",
    "ValidationError",
    "CayleyPair",
    "NefPartition",
    "cayley",
    "dual_nef_parts",
    "hypersurface_pair",
    "is_indecomposable",
    "validate_nef_partition",
    "Polytope",
    "convex_hull",
    "hull",
    "is_reflexive",
    "minkowski_sum",
    "polar",
    "HodgeDiamond",
    "TermBreakdown",
    "ample_case_hodge",
    "auxiliary_hodge",
    "consistency_relations",
    "e_poly",
    "h11_ci_generic",
    "h11_ci_indecomposable",
    "h11_hypersurface",
    "h21_ci",
    "hodge_diamond",
    "hodge_from_e",
    "is_minkowski_summand",
]
