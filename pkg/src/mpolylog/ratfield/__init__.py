"""Exact rational functions, expansion coefficients and matrix inversions."""

from .grammar import parse_ratfunc
from .laurent import (
    LaurentExpansion,
    boundary_term,
    build_matrix_boundary,
    build_matrix_general,
    c_rational,
    compositions,
    eulerian_weight,
    h_factor,
    laurent_expansion,
)
from .matrices import RatMatrix, invert_unitriangular, invert_upper_triangular
from .ratfunc import Poly, RatFunc, const, linear_form, var
from .transfer import matrix_A, matrix_A_inverse, matrix_B, matrix_B_inverse, nilpotent_M

__all__ = [
    "Poly",
    "RatFunc",
    "RatMatrix",
    "LaurentExpansion",
    "boundary_term",
    "build_matrix_boundary",
    "build_matrix_general",
    "c_rational",
    "compositions",
    "const",
    "eulerian_weight",
    "h_factor",
    "invert_unitriangular",
    "invert_upper_triangular",
    "laurent_expansion",
    "linear_form",
    "matrix_A",
    "matrix_A_inverse",
    "matrix_B",
    "matrix_B_inverse",
    "nilpotent_M",
    "parse_ratfunc",
    "var",
]
