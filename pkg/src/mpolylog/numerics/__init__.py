"""High-precision sums, tails, values, regularised values and identity checks."""

from .config import EvalConfig
from .sums import (
    TailValue,
    as_roots,
    partial_sum,
    partial_sum_exact,
    partial_sum_taylor,
    partial_sums,
    star_tail,
    star_tail_infinite,
    window_sums,
)
from .values import (
    RegularizedValue,
    fit_grids,
    generic_direction,
    li_value,
    regularized_taylor,
    regularized_value,
)
from .verify import (
    VerificationReport,
    verify_combi,
    verify_corollary_vrz,
    verify_expansion,
    verify_translation,
)

__all__ = [
    "EvalConfig",
    "TailValue",
    "as_roots",
    "partial_sum",
    "partial_sum_exact",
    "partial_sum_taylor",
    "partial_sums",
    "star_tail",
    "star_tail_infinite",
    "window_sums",
    "RegularizedValue",
    "fit_grids",
    "generic_direction",
    "li_value",
    "regularized_taylor",
    "regularized_value",
    "VerificationReport",
    "verify_combi",
    "verify_corollary_vrz",
    "verify_expansion",
    "verify_translation",
]
