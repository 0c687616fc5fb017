"""Exact arithmetic: Laurent polynomials, rational functions, matrices."""

from clusterpoisson.exact.laurent import (
    LaurentPoly,
    NotDivisible,
    RationalFunction,
    UnboundVariable,
    VariableMismatch,
    lp_arith,
    lp_exact_div,
    lp_substitute,
    symbols,
)
from clusterpoisson.exact.matrix import (
    Matrix,
    Singular,
    mat_det,
    mat_inverse,
    mat_nullspace,
    mat_rank,
    primitive,
)

__all__ = [
    "LaurentPoly",
    "Matrix",
    "NotDivisible",
    "RationalFunction",
    "Singular",
    "UnboundVariable",
    "VariableMismatch",
    "lp_arith",
    "lp_exact_div",
    "lp_substitute",
    "mat_det",
    "mat_inverse",
    "mat_nullspace",
    "mat_rank",
    "primitive",
    "symbols",
]
