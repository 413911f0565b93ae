"""Exact scalars, sparse polynomials, polynomial matrices and exact linear algebra."""
from .scalars import QQ, Field, as_fraction
from .poly import (Monomial, MultiPoly, Ring, RingMismatch, common_ring, monomials_of_degree,
                   monomials_up_to, partial_derivative, poly_arith, truncate, wdeg)
from .matrix import PolyMatrix, TruncatedVectorSpace, block
from .linalg import exact_rank_kernel, rank, sparse_rank
from .parse import PolySyntaxError, UnknownVariable, parse_many, parse_poly

__all__ = [
    "QQ", "Field", "as_fraction", "Monomial", "MultiPoly", "Ring", "RingMismatch", "common_ring",
    "monomials_of_degree", "monomials_up_to", "partial_derivative", "poly_arith", "truncate", "wdeg",
    "PolyMatrix", "TruncatedVectorSpace", "block", "exact_rank_kernel", "rank", "sparse_rank",
    "PolySyntaxError", "UnknownVariable", "parse_many", "parse_poly",
]
