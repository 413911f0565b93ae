"""Clifford algebras of quadratic forms and the matrix-factorization side:
the u-resolution of the residue field, the End-algebra comparison and the
hyperbolic triviality checks."""
from .algebra import CliffordAlgebra, CliffordError, QuadraticForm, clifford_mul
from .hyperbolic import (HyperbolicResult, MetabolicResult, hyperbolic_triviality, lagrangian_end_complex,
                         metabolic_knorrer_check)
from .uresolution import CliffordEndResult, UResolution, compare_clifford, mf_end_algebra

__all__ = ["CliffordAlgebra", "CliffordError", "QuadraticForm", "clifford_mul", "HyperbolicResult",
           "MetabolicResult", "hyperbolic_triviality", "lagrangian_end_complex", "metabolic_knorrer_check",
           "CliffordEndResult", "UResolution", "compare_clifford", "mf_end_algebra"]
