"""Triviality of the hyperbolic form and the metabolic Knorrer check.

For q = sum x_i y_i with Lagrangian L = {y = 0}, End(O_L) is modelled by
O_L[[beta]][gamma_1..gamma_r] (exterior in the gamma_i) with differential
gamma_i -> -x_i beta: a mixed complex with delta = 0 and B the Koszul
contraction on (x_1..x_r), gamma_S in degree |S|.  Inverting beta leaves the
Koszul homology k[x]/(x) = k in even degree, i.e. End(O_L) = k((beta)).
Before inverting, every positive-degree monomial in the x_i survives as an
order-1 beta-torsion class, so the torsion is infinite; the fitted module
lists only the bars in internal degree below D.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from ..exactalg import QQ, Field, Ring
from ..homalg.beta import BetaModule, decode_keyed, module_of
from ..homalg.complexes import FreeModule
from ..homalg.ext import ext_tate
from ..homalg.grading import Grading
from ..homalg.mixed import MixedComplex
from ..hochschild.forms import subsets
from ..mfcore import MatrixFactorization, knorrer_double, koszul_mf
from .algebra import CliffordError


@dataclass
class HyperbolicResult:
    r: int
    tate: Tuple[int, int]
    module: Optional[BetaModule]
    stabilized: bool
    cross_check: Optional[Tuple[int, int]]
    reason: str = ""
    D_used: int = 0

    @property
    def trivial(self) -> bool:
        return (self.tate == (1, 0) and self.module is not None and self.module.free_rank == (1, 0)
                and (self.cross_check is None or self.cross_check == (1, 0)))

    def to_json(self) -> dict:
        return {"r": self.r, "even": self.tate[0], "odd": self.tate[1], "trivial": self.trivial,
                "stabilized": self.stabilized, "module": self.module.to_json() if self.module else None,
                "cross_check": list(self.cross_check) if self.cross_check else None, "reason": self.reason,
                "D_used": self.D_used, "torsion_below_degree": self.D_used}


def lagrangian_end_complex(r: int) -> MixedComplex:
    R = Ring(tuple(f"x{i + 1}" for i in range(r)))
    grading = Grading(((1,) * r,))
    terms, bop = {}, {}
    for p in range(r + 1):
        sl = subsets(r, p)
        terms[p] = FreeModule(r, [("gamma", S) for S in sl], [(p,)] * len(sl))
        if p:
            tgt = {T: k for k, T in enumerate(subsets(r, p - 1))}
            ents = {}
            for k, S in enumerate(sl):
                for pos, i in enumerate(S):
                    ents[(tgt[S[:pos] + S[pos + 1:]], k)] = R.var(f"x{i + 1}") * (1 if pos % 2 else -1)
            bop[p] = ents
    return MixedComplex(r, terms, {}, bop, grading, (0,))


def hyperbolic_triviality(r: int, N: int = 6, D: int = 16, field: Field = QQ,
                          cross_check: bool = True) -> HyperbolicResult:
    """Tate dims of End(O_L) for the rank-r hyperbolic form, with the
    k[[beta]]-module fit; for small r the same number is recomputed as
    ext_tate of the Koszul factorization (x, y) of sum x_i y_i."""
    if r < 1:
        raise CliffordError("rank of the Lagrangian must be >= 1")
    if N < 2:
        raise CliffordError("N must be at least 2")
    C = lagrangian_end_complex(r)
    ev, od = C.tate(D, field)
    keyed = {}
    for n_ in range(1, N + 1):
        res = C.slice(n_, D, field)
        keyed[n_] = {(j, k): v for j, hd in res.items() for k, v in hd.by_block.items()}
    found, reason = decode_keyed(keyed, C.lo, C.hi, (0,))
    module = None if reason else module_of([b for bars in found.values() for b in bars])
    cc = None
    if cross_check and r <= 2:
        R = Ring(tuple(f"x{i + 1}" for i in range(r)) + tuple(f"y{i + 1}" for i in range(r)))
        m = koszul_mf([R.var(f"x{i + 1}") for i in range(r)], [R.var(f"y{i + 1}") for i in range(r)])
        cc = ext_tate(m, m, D, field).dims
    return HyperbolicResult(r, (ev.value, od.value), module, ev.stabilized and od.stabilized, cc, reason, D)


@dataclass
class MetabolicResult:
    before: Tuple[int, int]
    after: Tuple[int, int]
    stabilized: bool

    @property
    def preserved(self) -> bool:
        return self.before == self.after


def metabolic_knorrer_check(m: MatrixFactorization, r: int = 1, D: int = 16, field: Field = QQ) -> MetabolicResult:
    """ext_tate(m, m) against ext_tate of m tensored with r fresh hyperbolic planes."""
    a = ext_tate(m, m, D, field)
    mm = m
    for _ in range(r):
        mm = knorrer_double(mm)
    b = ext_tate(mm, mm, D, field)
    return MetabolicResult(a.dims, b.dims, a.stabilized and b.stabilized)
