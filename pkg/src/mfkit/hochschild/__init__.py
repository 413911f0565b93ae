"""Hochschild-type invariants of a potential: twisted de Rham and Koszul
complexes, Milnor numbers, the Jacobian ring, HKR and the cyclic bar B."""
from .forms import Form
from .hkr import BarWord, apply_B, cyclic_bar_B, expand, hkr_intertwine_check, hkr_intertwines, hkr_map
from .jacobian import (JacobianError, JacobianRing, MilnorResult, SoclePairing, global_jacobian_dim,
                       milnor_number, socle_pairing, thom_sebastiani_sum)
from .twisted import (HHBetaResult, HHResult, HochschildError, TwistedComplex, hc_tate, hh_beta,
                      hh_cochain_tate, hh_tate, supported_complex)

__all__ = ["Form", "BarWord", "apply_B", "cyclic_bar_B", "expand", "hkr_intertwine_check", "hkr_intertwines",
           "hkr_map", "JacobianError", "JacobianRing", "MilnorResult", "SoclePairing", "global_jacobian_dim",
           "milnor_number", "socle_pairing", "thom_sebastiani_sum", "HHBetaResult", "HHResult",
           "HochschildError", "TwistedComplex", "hc_tate", "hh_beta", "hh_cochain_tate", "hh_tate",
           "supported_complex"]
