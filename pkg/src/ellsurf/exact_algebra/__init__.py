"""Exact arithmetic: QQ, number fields, polynomials, rational functions, square classes."""

from .factor import Factor, SupplyPlacesError, factor, factor_rational
from .fields import QQ, NFElement, NumberField, RationalField, cyclotomic8, rational_square_class, squarefree_integer_part
from .galois import FieldAutomorphism, galois_conjugate, power_automorphism
from .poly import Poly, RationalFunction, discriminant, gcd, lcm, resultant, squarefree_decomposition, xgcd
from .squares import SquareClass, is_square, sqrt_poly, squarefree_part

__all__ = [
    "QQ", "NFElement", "NumberField", "RationalField", "cyclotomic8", "rational_square_class",
    "squarefree_integer_part", "Factor", "SupplyPlacesError", "factor", "factor_rational",
    "FieldAutomorphism", "galois_conjugate", "power_automorphism", "Poly", "RationalFunction",
    "discriminant", "gcd", "lcm", "resultant", "squarefree_decomposition", "xgcd", "SquareClass",
    "is_square", "sqrt_poly", "squarefree_part",
]
