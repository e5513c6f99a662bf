"""Exact arithmetic: rationals, sparse polynomials, rational functions, parsing, nullspaces."""

from .linalg import ExactMatrix, bareiss_echelon, nullspace, rank, solve_in_span, sparse_nullspace, sparse_rank
from .parser import Expr, Leaf, parse_expression, parse_polynomial, parse_rational_function, parse_value
from .polynomial import Polynomial, VarSet, as_fraction, format_polynomial
from .ratfunc import RationalFunction, rf_equal


def evaluate(p, assignment):
    """Exact value of a polynomial or rational function at a rational point."""
    return p.evaluate(assignment)


__all__ = [
    "ExactMatrix",
    "Expr",
    "Leaf",
    "Polynomial",
    "RationalFunction",
    "VarSet",
    "as_fraction",
    "bareiss_echelon",
    "evaluate",
    "format_polynomial",
    "nullspace",
    "parse_expression",
    "parse_polynomial",
    "parse_rational_function",
    "parse_value",
    "rank",
    "rf_equal",
    "solve_in_span",
    "sparse_nullspace",
    "sparse_rank",
]
