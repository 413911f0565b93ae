"""Twisted de Rham and polyvector Koszul complexes of a potential f.

    Omega^.,  -df^            (Hochschild homology after inverting beta)
    wedge^. T, -i_df          (Hochschild cohomology)
    Omega^. [u]/u^K, -df^ + u d   (u-truncated cyclic version)

All complexes are graded by form degree p; the beta-inverted invariants are
the Z/2 folds by the parity of p.  When f is quasi-homogeneous the forms get
internal shifts (dx_i has weight w_i, d/dx_i weight -w_i, u weight deg f)
and every differential is homogeneous of degree deg f, so the homology
engine runs blockwise and exactly; otherwise it falls back to total-degree
truncation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..exactalg import QQ, Field, MultiPoly, TruncatedVectorSpace, monomials_up_to
from ..homalg.beta import BetaFit, BetaModule, decode_keyed, module_of
from ..homalg.complexes import ContractEntry, DerivEntry, FreeModule
from ..homalg.grading import Grading, poly_grading
from ..homalg.mixed import MixedComplex
from . import forms as F

DEFAULT_D = 16
KINDS = ("df_wedge", "i_df", "de_rham", "mixed")


class HochschildError(ValueError):
    pass


@dataclass
class HHResult:
    even: int
    odd: int
    stabilized: bool
    D_used: int
    by_degree: Dict[int, int] = field(default_factory=dict)     # form degree p -> dim
    certificate: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.even, self.odd)

    def to_json(self) -> dict:
        return {"even": self.even, "odd": self.odd, "stabilized": self.stabilized,
                "D_used": self.D_used, "by_degree": {str(k): v for k, v in sorted(self.by_degree.items())},
                "certificate": self.certificate}


def _row_sum(rows, I) -> Tuple[int, ...]:
    return tuple(sum(row[i] for i in I) for row in rows)


class TwistedComplex:
    """One of the complexes above, with operators available both as module maps
    (for the homology engine) and as dense matrices on truncations.

    ``sign_df`` multiplies df^ and ``sign_idf`` multiplies i_df; the defaults
    are -1 for both.  Only sign-independent dimensions are ever asserted."""

    def __init__(self, f: MultiPoly, kind: str = "df_wedge", K: int = 1,
                 sign_df: int = -1, sign_idf: int = -1, graded: bool = True):
        if kind not in KINDS:
            raise HochschildError(f"unknown differential {kind!r}; choose from {KINDS}")
        if K < 1:
            raise HochschildError("u-truncation K must be >= 1")
        self.f = f
        self.kind = kind
        self.K = K if kind == "mixed" else 1
        self.sign_df = sign_df
        self.sign_idf = sign_idf
        self.n = f.ring.n
        gd = poly_grading(f) if graded else None
        self.grading: Optional[Grading] = gd[0] if gd else None
        self.fdeg: Tuple[int, ...] = tuple(gd[1]) if gd else ()
        self.partials = [f.diff(i) for i in range(self.n)]

    # ---------------------------------------------------------------- shapes
    @property
    def polyvector(self) -> bool:
        return self.kind == "i_df"

    def slots(self, p: int) -> List[F.Index]:
        return F.subsets(self.n, p)

    def _shift(self, I, b: int = 0) -> Tuple[int, ...]:
        if self.grading is None:
            return ()
        s = _row_sum(self.grading.rows, I)
        if self.polyvector:
            s = tuple(-x for x in s)
        return tuple(x + b * d for x, d in zip(s, self.fdeg))

    # ------------------------------------------------------ module-level maps
    def _df_entries(self, p: int) -> Dict[Tuple[int, int], MultiPoly]:
        src, tgt = self.slots(p), {J: k for k, J in enumerate(self.slots(p + 1))}
        out = {}
        for k, I in enumerate(src):
            for i in range(self.n):
                ins = F.insert_index(i, I)
                if ins is not None and self.partials[i]:
                    s, J = ins
                    out[(tgt[J], k)] = self.partials[i] * (s * self.sign_df)
        return out

    def _idf_entries(self, p: int) -> Dict[Tuple[int, int], MultiPoly]:
        src, tgt = self.slots(p), {J: k for k, J in enumerate(self.slots(p - 1))} if p else {}
        out = {}
        for k, I in enumerate(src):
            for pos, i in enumerate(I):
                if self.partials[i]:
                    J = I[:pos] + I[pos + 1:]
                    out[(tgt[J], k)] = self.partials[i] * ((-1 if pos % 2 else 1) * self.sign_idf)
        return out

    def _d_entries(self, p: int) -> Dict[Tuple[int, int], DerivEntry]:
        src, tgt = self.slots(p), {J: k for k, J in enumerate(self.slots(p + 1))}
        out = {}
        for k, I in enumerate(src):
            for i in range(self.n):
                ins = F.insert_index(i, I)
                if ins is not None:
                    s, J = ins
                    out[(tgt[J], k)] = DerivEntry(i, Fraction(s))
        return out

    def mixed_complex(self) -> MixedComplex:
        """The complex as a MixedComplex graded by j (B = 0)."""
        n, terms, delta = self.n, {}, {}
        if self.kind == "i_df":
            for p in range(n + 1):
                terms[-p] = FreeModule(n, [("pv", I) for I in self.slots(p)],
                                       [self._shift(I) for I in self.slots(p)])
                if p:
                    delta[-p] = self._idf_entries(p)
        elif self.kind in ("df_wedge", "de_rham"):
            for p in range(n + 1):
                terms[p] = FreeModule(n, [("form", I) for I in self.slots(p)],
                                      [self._shift(I) for I in self.slots(p)])
                if p < n:
                    delta[p] = self._df_entries(p) if self.kind == "df_wedge" else self._d_entries(p)
        else:
            K = self.K
            for p in range(n + 1):
                labels, shifts = [], []
                for b in range(K):
                    for I in self.slots(p):
                        labels.append(("form", b, I))
                        shifts.append(self._shift(I, b))
                terms[p] = FreeModule(n, labels, shifts)
                if p == n:
                    continue
                m_src, m_tgt = len(self.slots(p)), len(self.slots(p + 1))
                ents: Dict = {}
                dfe, de = self._df_entries(p), self._d_entries(p)
                for b in range(K):
                    for (t, s), e in dfe.items():
                        ents[(b * m_tgt + t, b * m_src + s)] = e
                    if b + 1 < K:
                        for (t, s), e in de.items():
                            ents[((b + 1) * m_tgt + t, b * m_src + s)] = e
                delta[p] = ents
        hdeg = self.fdeg if self.kind != "de_rham" else tuple(0 for _ in self.fdeg)
        return MixedComplex(n, terms, delta, {}, self.grading, hdeg)

    # ----------------------------------------------------- form-level action
    def apply(self, op: str, form: F.Form) -> F.Form:
        if op == "df_wedge":
            return F.scale(F.df_wedge(self.f, form), self.sign_df)
        if op == "i_df":
            return F.scale(F.contract_df(self.f, form), self.sign_idf)
        if op == "de_rham":
            return F.de_rham(form)
        raise HochschildError(f"unknown operator {op!r}")

    def _degree_step(self, op: str) -> int:
        if op == "de_rham":
            return 0
        return max(0, max((g.degree() for g in self.partials if g), default=0))

    def truncation(self, p: int, D: int) -> TruncatedVectorSpace:
        monos = monomials_up_to(self.n, D)
        return TruncatedVectorSpace(tuple((I, m) for I in self.slots(p) for m in monos))

    def matrix(self, op: str, p: int, D: int):
        """Dense matrix of ``op`` from the degree-<=D truncation in degree p to
        the truncation just large enough to hold the image."""
        R = self.f.ring
        src = self.truncation(p, D)
        q = p - 1 if op == "i_df" else p + 1
        tgt = self.truncation(q, D + self._degree_step(op))

        def image(label):
            I, m = label
            out = self.apply(op, {I: R.monomial(m)})
            return {(J, mm): c for J, g in out.items() for mm, c in g.terms.items()}

        if q < 0 or q > self.n:
            return [], src, TruncatedVectorSpace(())
        return src.matrix_of(tgt, image), src, tgt

    def check_identities(self, D: int) -> Dict[str, bool]:
        """(df^)^2, (i_df)^2, d^2 and d(df^) + (df^)d vanish as matrices on
        every truncation up to degree D."""
        res = {}
        n = self.n
        e = self._degree_step("df_wedge")

        def comp(op2, p2, D2, m1):
            m2, _, _ = self.matrix(op2, p2, D2)
            return _matmul(m2, m1)

        ok = True
        for p in range(n - 1):
            m1, _, _ = self.matrix("df_wedge", p, D)
            ok &= _is_zero(comp("df_wedge", p + 1, D + e, m1))
        res["df_wedge^2"] = ok
        ok = True
        for p in range(2, n + 1):
            m1, _, _ = self.matrix("i_df", p, D)
            ok &= _is_zero(comp("i_df", p - 1, D + e, m1))
        res["i_df^2"] = ok
        ok = True
        for p in range(n - 1):
            m1, _, _ = self.matrix("de_rham", p, D)
            ok &= _is_zero(comp("de_rham", p + 1, D, m1))
        res["de_rham^2"] = ok
        ok = True
        for p in range(n - 1):
            a, _, _ = self.matrix("df_wedge", p, D)
            a = comp("de_rham", p + 1, D + e, a)
            b, _, _ = self.matrix("de_rham", p, D)
            b = comp("df_wedge", p + 1, D, b)
            ok &= _is_zero([[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)])
        res["anticommutator"] = ok
        return res


def _matmul(a, b):
    if not a or not b:
        return []
    cols = len(b[0])
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def _is_zero(m) -> bool:
    return all(not x for row in m for x in row)


# --------------------------------------------------------------- invariants

def _fold_result(C: MixedComplex, by_j, D: int, p_of_j) -> HHResult:
    ev = [0, 0, 0]
    od = [0, 0, 0]
    by_degree = {}
    for j, hd in by_j.items():
        p = p_of_j(j)
        by_degree[p] = hd.value
        tgt = ev if p % 2 == 0 else od
        for k, v in enumerate(hd.dims):
            tgt[k] += v
    stab = len(set(ev)) == 1 and len(set(od)) == 1
    return HHResult(ev[-1], od[-1], stab, D, {p: v for p, v in by_degree.items() if v},
                    {"even": ev, "odd": od})


def _require_poly(f):
    if not isinstance(f, MultiPoly):
        raise HochschildError("expected a polynomial")


def hh_tate(f: MultiPoly, D_max: int = DEFAULT_D, field: Field = QQ, sign: int = -1) -> HHResult:
    """Fold of (Omega^., -df^) with Omega^p in parity p."""
    _require_poly(f)
    T = TwistedComplex(f, "df_wedge", sign_df=sign)
    C = T.mixed_complex()
    return _fold_result(C, C.plain(D_max, field), D_max, lambda j: j)


def hh_cochain_tate(f: MultiPoly, D_max: int = DEFAULT_D, field: Field = QQ, sign: int = -1) -> HHResult:
    """Fold of the Koszul complex (wedge^. T, -i_df) with wedge^p T in parity p."""
    _require_poly(f)
    T = TwistedComplex(f, "i_df", sign_idf=sign)
    C = T.mixed_complex()
    return _fold_result(C, C.plain(D_max, field), D_max, lambda j: -j)


def hc_tate(f: MultiPoly, K: int, D_max: int = DEFAULT_D, field: Field = QQ) -> HHResult:
    """Cohomology of (Omega^.[u]/u^K, -df^ + u d), graded by form degree.

    K = 1 is hh_tate.  No normalization of u against classical cyclic
    homology is implied; the dims are what the truncated complex gives."""
    _require_poly(f)
    if K < 1:
        raise HochschildError("K must be >= 1")
    T = TwistedComplex(f, "mixed", K=K)
    C = T.mixed_complex()
    return _fold_result(C, C.plain(D_max, field), D_max, lambda j: j)


# ------------------------------------------------- supported beta-module version

@dataclass
class HHBetaResult:
    module: Optional[BetaModule]
    fit: BetaFit
    slices: Dict[int, Dict[int, int]]
    D_used: int
    N_used: int
    free_rank_stable: bool
    history: Dict[int, Optional[BetaModule]] = field(default_factory=dict)

    @property
    def determined(self) -> bool:
        return self.module is not None

    def to_json(self) -> dict:
        return {"module": self.module.to_json() if self.module else None,
                "determined": self.determined, "reason": self.fit.reason,
                "D_used": self.D_used, "N_used": self.N_used,
                "stabilized": self.free_rank_stable,
                "slices": {str(N): {str(j): v for j, v in sorted(s.items())} for N, s in self.slices.items()}}


def supported_complex(f: MultiPoly, grading: Grading, fdeg, sign: int = -1) -> MixedComplex:
    """H^n_m(Omega^p) with B = sign*df^, Omega^p placed in degree n - p.

    Local cohomology at the origin of the polynomial ring is the module of
    inverse polynomials x^(-a-1), a >= 0; it is the union of the Koszul
    cutoffs 0 :_H (x_1^S..x_n^S) = span{a_i < S}.  The slot monomial a stands
    for x^(-a-1) and its internal degree is reflected, w.(a+1) - w_I, so
    blocks are finite and bounded below; multiplication lowers exponents."""
    n = f.ring.n
    terms, bop = {}, {}
    tot = tuple(sum(row) for row in grading.rows)
    partials = [f.diff(i) for i in range(n)]
    for p in range(n + 1):
        sl = F.subsets(n, p)
        shifts = [tuple(t - s for t, s in zip(tot, _row_sum(grading.rows, I))) for I in sl]
        terms[n - p] = FreeModule(n, [("form", I) for I in sl], shifts)
        if p == n:
            continue
        tgt = {J: k for k, J in enumerate(F.subsets(n, p + 1))}
        ents = {}
        for k, I in enumerate(sl):
            for i in range(n):
                ins = F.insert_index(i, I)
                if ins is not None and partials[i]:
                    s, J = ins
                    ents[(tgt[J], k)] = ContractEntry(partials[i] * (s * sign))
        bop[n - p] = ents
    return MixedComplex(n, terms, {}, bop, grading, tuple(-d for d in fdeg))


def hh_beta(f: MultiPoly, N_max: int = 6, D_max: int = DEFAULT_D, field: Field = QQ,
            sign: int = -1) -> HHBetaResult:
    """k[[beta]]-module of the supported twisted complex RGamma_m(Omega, beta*(-df^)).

    Slices mod beta^N are computed exactly on every internal-degree block up
    to D_max and fitted to a BetaModule.  The free part is finite for an
    isolated singularity; the torsion is infinite (all of H^n_m(Omega^n) is
    killed by beta), so the reported torsion is the part below D_max.  The
    fit is redone at D_max - 2 and D_max - 1 and free_rank_stable records
    whether the free ranks agree at all three bounds."""
    _require_poly(f)
    if N_max < 2:
        raise HochschildError("N_max must be at least 2")
    gd = poly_grading(f)
    if gd is None:
        raise HochschildError("hh_beta needs a quasi-homogeneous potential")
    grading, fdeg = gd
    C = supported_complex(f, grading, fdeg, sign)
    keyed: Dict[int, Dict] = {}
    flat: Dict[int, Dict[int, int]] = {}
    for N in range(1, N_max + 1):
        res = C.slice(N, D_max, field)
        keyed[N] = {(j, k): v for j, hd in res.items() for k, v in hd.by_block.items()}
        flat[N] = {j: hd.value for j, hd in res.items() if hd.value}
    found, reason = decode_keyed(keyed, C.lo, C.hi, tuple(fdeg))
    history: Dict[int, Optional[BetaModule]] = {}
    for D in range(D_max - 2, D_max + 1):
        history[D] = None if reason else module_of(
            [b for k, bars in found.items() if k[0] <= D for b in bars])
    module = history[D_max]
    bars = [b for bars in found.values() for b in bars]
    fit = BetaFit(module, bars, module is not None, reason)
    frees = {m.free_rank if m else None for m in history.values()}
    stable = len(frees) == 1 and None not in frees
    return HHBetaResult(module, fit, flat, D_max, N_max, stable, history)
