"""Hom complexes of matrix factorizations and Ext over k, k[[beta]]/beta^N and k((beta))."""
from .beta import BetaFitError, BetaModule, decode
from .ext import (BetaResult, ExtError, ExtResult, beta_torsion_test, ext_beta, ext_k, ext_tate,
                  hom_complex, pairing_dims)
from .grading import infer_weights, mf_grading, poly_grading
from .mixed import MixedComplex

__all__ = ["BetaFitError", "BetaModule", "decode", "BetaResult", "ExtError", "ExtResult",
           "beta_torsion_test", "ext_beta", "ext_k", "ext_tate", "hom_complex", "pairing_dims",
           "infer_weights", "mf_grading", "poly_grading", "MixedComplex"]
