"""Exact computational workbench for algebras of differential operators
tangent to free hyperplane arrangements."""

from .exact_arith import (
    Cyclotomic,
    NotDivisible,
    Polynomial,
    ScalarMatrix,
    kernel_basis,
    poly_exact_div,
    poly_from_str,
    poly_gcd,
    poly_to_str,
    zeta,
)

__all__ = [
    "Cyclotomic",
    "NotDivisible",
    "Polynomial",
    "ScalarMatrix",
    "kernel_basis",
    "poly_exact_div",
    "poly_from_str",
    "poly_gcd",
    "poly_to_str",
    "zeta",
]

__version__ = "0.1.0"
