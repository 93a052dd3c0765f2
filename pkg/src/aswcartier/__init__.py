"""Exact Cartier-Manin computations for Z/p^2 Artin-Schreier-Witt covers of P^1."""

from .asw import (BranchingDatum, CoverSpec, MinimalProfile, WittVec2, asw_reduce,
                  bc_bounds, bc_bounds_intermediate, fp_anumber_minimal, genus,
                  is_minimal, sample_minimal_as_cover, sample_minimal_cover,
                  validate_datum, witt_add2)
from .basis import BasisElement, enumerate_basis, enumerate_basis_minimal
from .cartier import CMMatrix, cartier_diff, cartier_manin, oracle_check, rank_and_anumber
from .gf import FieldDesc, make_field
from .keyterms import key_term, rank_lower_bound
from .parse import ParseError, parse_ratfunc_expr
from .ratfunc import INF, RatFunc

__version__ = "0.1.0"

__all__ = [
    "BasisElement", "BranchingDatum", "CMMatrix", "CoverSpec", "FieldDesc", "INF",
    "MinimalProfile", "ParseError", "RatFunc", "WittVec2", "asw_reduce", "bc_bounds",
    "bc_bounds_intermediate", "cartier_diff", "cartier_manin", "enumerate_basis",
    "enumerate_basis_minimal", "fp_anumber_minimal", "genus", "is_minimal", "key_term",
    "make_field", "oracle_check", "parse_ratfunc_expr", "rank_and_anumber",
    "rank_lower_bound", "sample_minimal_as_cover", "sample_minimal_cover",
    "validate_datum", "witt_add2",
]
