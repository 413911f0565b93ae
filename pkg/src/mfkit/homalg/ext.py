"""Hom complexes between matrix factorizations and the Ext computations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..exactalg import QQ, Field, MultiPoly
from ..mfcore import MatrixFactorization, MFError, dual, require_valid
from .beta import BetaFit, BetaModule, decode
from .complexes import FreeModule
from .grading import mf_grading
from .mixed import MixedComplex

DEFAULT_D = 16
DEFAULT_N = 6


class ExtError(ValueError):
    pass


def _check_pair(m: MatrixFactorization, n: MatrixFactorization):
    if m.ring != n.ring:
        raise ExtError(f"factorizations live over different rings: {m.ring} vs {n.ring}")
    if m.f != n.f:
        raise ExtError("superpotentials differ")
    require_valid(m)
    require_valid(n)


def hom_complex(m: MatrixFactorization, n: MatrixFactorization, graded: bool = True) -> MixedComplex:
    """Hom(m, n) with delta and B the degree +1 / -1 parts of [d, -].

    The operator on phi is  X phi - (-1)^{|phi|} phi X  for X = d, delta, B."""
    _check_pair(m, n)
    R = m.ring
    gr = mf_grading(m.f, [m, n]) if graded else None
    dV, dW = m.odd_operator(), n.odd_operator()
    degV, degW = m.basis_degrees(), n.basis_degrees()
    parV, parW = m.basis_parities(), n.basis_parities()
    rV, rW = 2 * m.rank, 2 * n.rank
    slots: Dict[int, List[Tuple[int, int]]] = {}
    for a in range(rW):
        for b in range(rV):
            slots.setdefault(degW[a] - degV[b], []).append((a, b))
    index = {j: {s: k for k, s in enumerate(lst)} for j, lst in slots.items()}
    terms = {}
    for j, lst in slots.items():
        if gr is not None:
            sV, sW = gr.shifts[0], gr.shifts[1]
            shifts = [tuple(x - y for x, y in zip(sW[a], sV[b])) for a, b in lst]
        else:
            shifts = [()] * len(lst)
        terms[j] = FreeModule(R.n, [("hom", a, b) for a, b in lst], shifts)
    delta: Dict[int, Dict] = {}
    bop: Dict[int, Dict] = {}
    for j, lst in slots.items():
        for k, (a, b) in enumerate(lst):
            sign = -1 if (parW[a] + parV[b]) % 2 == 0 else 1   # -(-1)^{|phi|}
            contribs = []
            for a2 in range(rW):
                e = dW[a2, a]
                if e:
                    contribs.append(((a2, b), e))
            for b2 in range(rV):
                e = dV[b, b2]
                if e:
                    contribs.append(((a, b2), e * sign))
            for (a2, b2), e in contribs:
                jj = degW[a2] - degV[b2]
                tgt = (delta if jj == j + 1 else bop).setdefault(j, {})
                key = (index[jj][(a2, b2)], k)
                tgt[key] = tgt[key] + e if key in tgt else e
    return MixedComplex(R.n, terms, delta, bop, gr.grading if gr else None,
                        gr.h if gr else (), None)


@dataclass
class ExtResult:
    even: int
    odd: int
    stabilized: bool
    D_used: int
    certificate: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.even, self.odd)


def _fold(dims_by_j) -> Tuple[List[int], List[int]]:
    ev = od = None
    for j, hd in dims_by_j.items():
        if j % 2 == 0:
            ev = list(hd.dims) if ev is None else [x + y for x, y in zip(ev, hd.dims)]
        else:
            od = list(hd.dims) if od is None else [x + y for x, y in zip(od, hd.dims)]
    return ev or [0, 0, 0], od or [0, 0, 0]


def ext_k(m, n, D_max: int = DEFAULT_D, field: Field = QQ) -> ExtResult:
    """Cohomology of (Hom, delta): Ext over the ambient ring of the two modules."""
    C = hom_complex(m, n)
    ev, od = _fold(C.plain(D_max, field))
    return ExtResult(ev[-1], od[-1], len(set(ev)) == 1 and len(set(od)) == 1, D_max,
                     {"even": ev, "odd": od})


def ext_tate(m, n, D_max: int = DEFAULT_D, field: Field = QQ) -> ExtResult:
    """Cohomology of the two-periodic Hom complex (beta inverted)."""
    C = hom_complex(m, n)
    ev, od = C.tate(D_max, field)
    return ExtResult(ev.value, od.value, ev.stabilized and od.stabilized, D_max,
                     {"even": list(ev.dims), "odd": list(od.dims)})


@dataclass
class BetaResult:
    module: Optional[BetaModule]
    fit: BetaFit
    slices: Dict[int, Dict[int, int]]
    slice_totals: Dict[int, Tuple[int, int]]
    stabilized: bool
    D_used: int
    N_used: int
    tate: Optional[ExtResult] = None
    consistent_with_tate: Optional[bool] = None

    @property
    def determined(self) -> bool:
        return self.module is not None


def beta_slices(C: MixedComplex, N_max: int, D_max: int, field: Field = QQ):
    slices, stab = {}, True
    for N in range(1, N_max + 1):
        res = C.slice(N, D_max, field)
        slices[N] = {j: hd.value for j, hd in res.items()}
        stab = stab and all(hd.stabilized for hd in res.values())
    return slices, stab


def fit_slices(C: MixedComplex, slices, stab, N_max, D_max, tate: Optional[ExtResult] = None) -> BetaResult:
    fit = decode(slices, C.lo, C.hi)
    totals = {N: (sum(v for j, v in s.items() if j % 2 == 0), sum(v for j, v in s.items() if j % 2))
              for N, s in slices.items()}
    res = BetaResult(fit.module, fit, slices, totals, stab, D_max, N_max, tate)
    if tate is not None and fit.module is not None:
        res.consistent_with_tate = fit.module.free_rank == tate.dims
        if not res.consistent_with_tate:
            res.module = None
            fit.determined = False
            fit.reason = f"free ranks {fit.module.free_rank} disagree with the two-periodic value {tate.dims}"
    return res


def ext_beta(m, n, N_max: int = DEFAULT_N, D_max: int = DEFAULT_D, field: Field = QQ) -> BetaResult:
    """Ext over k[[beta]]: slices mod beta^N for N = 1..N_max fitted to a BetaModule.

    The free ranks are cross-checked against the directly computed
    two-periodic (Tate) Ext."""
    if N_max < 2:
        raise ExtError("N_max must be at least 2")
    C = hom_complex(m, n)
    slices, stab = beta_slices(C, N_max, D_max, field)
    ev, od = C.tate(D_max, field)
    tate = ExtResult(ev.value, od.value, ev.stabilized and od.stabilized, D_max,
                     {"even": list(ev.dims), "odd": list(od.dims)})
    return fit_slices(C, slices, stab and tate.stabilized, N_max, D_max, tate)


def beta_torsion_test(m: MatrixFactorization, D_max: int = DEFAULT_D, field: Field = QQ) -> bool:
    """True iff m vanishes in MF, i.e. End(m) is killed by a power of beta."""
    return ext_tate(m, m, D_max, field).dims == (0, 0)


def pairing_dims(m, n, D_max: int = DEFAULT_D, field: Field = QQ):
    """(ext_tate(dual m, dual n), ext_tate(n, m)); duality says they agree."""
    a = ext_tate(dual(m), dual(n), D_max, field)
    b = ext_tate(n, m, D_max, field)
    return a.dims, b.dims
