"""Homology of complexes of free polynomial modules by truncated exact linear algebra.

Graded mode: every module slot has an internal shift per grading row and
every map is homogeneous, so the complex splits into finite blocks keyed by
internal degree; a block's homology is exact.  Bound D caps the primary
degree of the middle term.

Ungraded mode: the middle term is cut at total degree <= D.  Cycles are
exact; boundaries are generated from sources of degree <= D + slack and
intersected with the truncation by a rank count.  Either way dims are
reported at D-2, D-1, D; agreement is the stabilization certificate.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..exactalg import QQ, Field, MultiPoly, exact_rank_kernel, monomials_of_degree, sparse_rank
from .grading import Grading

WINDOW = 3


@dataclass
class FreeModule:
    """Free module over k[x] (or k[x]/(x_i^S) when ``max_exp`` is set)."""

    n: int
    labels: List[Hashable]
    shifts: List[Tuple[Fraction, ...]]             # internal shift per grading row
    max_exp: Optional[int] = None

    def __post_init__(self):
        if len(self.labels) != len(self.shifts):
            raise ValueError("one shift tuple per slot")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def allowed(self, mono) -> bool:
        return self.max_exp is None or all(a < self.max_exp for a in mono)


@dataclass(frozen=True)
class DerivEntry:
    """The differential operator g -> coeff * dg/dx_var (not R-linear)."""

    var: int
    coeff: Fraction = Fraction(1)

    def __neg__(self):
        return DerivEntry(self.var, -self.coeff)

    def __bool__(self):
        return bool(self.coeff)

    def degree(self):
        return 0


@dataclass(frozen=True)
class ContractEntry:
    """Multiplication on inverse polynomials: slot monomial a stands for
    x^(-a-1), so x^m sends a to a - m (or to zero when some a_i < m_i)."""

    poly: MultiPoly

    def __neg__(self):
        return ContractEntry(-self.poly)

    def __bool__(self):
        return bool(self.poly)

    def degree(self):
        return 0


@dataclass
class PolyMap:
    """Sparse R-linear map between free modules: entries[(tgt, src)] = polynomial."""

    source: FreeModule
    target: FreeModule
    entries: Dict[Tuple[int, int], MultiPoly]
    degree: Tuple[Fraction, ...] = ()

    def columns(self) -> Dict[int, List[Tuple[int, List]]]:
        cols: Dict[int, List] = defaultdict(list)
        for (i, j), e in self.entries.items():
            if isinstance(e, (DerivEntry, ContractEntry)):
                if e:
                    cols[j].append((i, e))
            elif e:
                cols[j].append((i, list(e.terms.items())))
        return cols


def direct_sum(mods: Sequence[FreeModule]) -> Tuple[FreeModule, List[int]]:
    labels, shifts, offs = [], [], []
    for m in mods:
        offs.append(len(labels))
        labels.extend(m.labels)
        shifts.extend(m.shifts)
    n = mods[0].n if mods else 0
    max_exp = mods[0].max_exp if mods else None
    return FreeModule(n, labels, shifts, max_exp), offs


def zero_module(n: int, nrows: int, max_exp=None) -> FreeModule:
    return FreeModule(n, [], [], max_exp)


# ------------------------------------------------------------------ enumeration

class _Enumerator:
    """Basis elements (slot, monomial) of a module grouped by full degree key."""

    def __init__(self, mod: FreeModule, grading: Optional[Grading]):
        self.mod = mod
        self.grading = grading
        self.blocks: Dict[Tuple, List[Tuple[int, Tuple[int, ...]]]] = {}
        self.done_upto = None
        self._mono_cache: Dict[int, List[Tuple[int, ...]]] = {}

    def _monos(self, d: int):
        if d not in self._mono_cache:
            w = self.grading.primary if self.grading else None
            self._mono_cache[d] = [m for m in monomials_of_degree(self.mod.n, d, w) if self.mod.allowed(m)]
        return self._mono_cache[d]

    def fill(self, lo: Fraction, hi: Fraction):
        """Populate all blocks whose primary key lies in [lo, hi]."""
        g = self.grading
        for slot, sh in enumerate(self.mod.shifts):
            s0 = sh[0]
            dlo = max(0, _ceil(lo - s0))
            dhi = _floor(hi - s0)
            for d in range(dlo, dhi + 1):
                if self.done_upto is not None and (self.done_upto[0] <= d + s0 <= self.done_upto[1]):
                    continue
                for m in self._monos(d):
                    key = tuple(a + b for a, b in zip(g.mono_key(m), sh))
                    self.blocks.setdefault(key, []).append((slot, m))
        if self.done_upto is None:
            self.done_upto = (lo, hi)
        else:
            self.done_upto = (min(lo, self.done_upto[0]), max(hi, self.done_upto[1]))

    def block(self, key) -> List[Tuple[int, Tuple[int, ...]]]:
        return self.blocks.get(key, [])


def _ceil(x) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def _floor(x) -> int:
    x = Fraction(x)
    return x.numerator // x.denominator


def _image_vectors(elems, cols, allowed, key_index=None):
    """Images of basis elements as sparse dict vectors keyed by (slot, monomial)."""
    out = []
    for slot, m in elems:
        vec: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}
        for i, terms in cols.get(slot, ()):
            if isinstance(terms, DerivEntry):
                a = m[terms.var]
                if a:
                    nm = m[:terms.var] + (a - 1,) + m[terms.var + 1:]
                    k = (i, nm)
                    v = vec.get(k, 0) + terms.coeff * a
                    if v:
                        vec[k] = v
                    else:
                        vec.pop(k, None)
                continue
            if isinstance(terms, ContractEntry):
                for mm, c in terms.poly.terms.items():
                    if all(a >= b for a, b in zip(m, mm)):
                        k = (i, tuple(a - b for a, b in zip(m, mm)))
                        v = vec.get(k, 0) + c
                        if v:
                            vec[k] = v
                        else:
                            vec.pop(k, None)
                continue
            for mm, c in terms:
                nm = tuple(a + b for a, b in zip(m, mm))
                if not allowed(nm):
                    continue
                k = (i, nm)
                v = vec.get(k, 0) + c
                if v:
                    vec[k] = v
                else:
                    vec.pop(k, None)
        out.append(vec)
    return out


def _index_vectors(vecs, index: Dict) -> List[Dict[int, Fraction]]:
    rows = []
    for v in vecs:
        r = {}
        for k, c in v.items():
            if k not in index:
                index[k] = len(index)
            r[index[k]] = c
        rows.append(r)
    return rows


@dataclass
class HomologyDims:
    bounds: Tuple[int, ...]
    dims: Tuple[int, ...]
    by_block: Dict[Tuple, int] = field(default_factory=dict)

    @property
    def value(self) -> int:
        return self.dims[-1]

    @property
    def stabilized(self) -> bool:
        return len(set(self.dims)) == 1

    def __add__(self, other: "HomologyDims") -> "HomologyDims":
        bb = dict(self.by_block)
        for k, v in other.by_block.items():
            bb[k] = bb.get(k, 0) + v
        return HomologyDims(self.bounds, tuple(a + b for a, b in zip(self.dims, other.dims)), bb)


def homology(mid: FreeModule, out: Optional[PolyMap], inc: Optional[PolyMap],
             grading: Optional[Grading], D: int, field: Field = QQ, slack: Optional[int] = None,
             window: int = WINDOW) -> HomologyDims:
    """dim of ker(out)/im(inc) at mid, at bounds D-window+1 .. D."""
    bounds = tuple(range(D - window + 1, D + 1))
    if grading is not None:
        return _graded_homology(mid, out, inc, grading, bounds, field)
    return _ungraded_homology(mid, out, inc, bounds, field, slack)


def _graded_homology(mid, out, inc, grading, bounds, field) -> HomologyDims:
    D = bounds[-1]
    em = _Enumerator(mid, grading)
    lo = min((s[0] for s in mid.shifts), default=Fraction(0))
    em.fill(lo, Fraction(D))
    out_cols = out.columns() if out is not None else {}
    inc_cols = inc.columns() if inc is not None else {}
    es = _Enumerator(inc.source, grading) if inc is not None else None
    if es is not None:
        hin = inc.degree
        slo = min((s[0] for s in inc.source.shifts), default=Fraction(0))
        es.fill(slo, Fraction(D) - hin[0])
    by_block = {}
    for key, elems in em.blocks.items():
        if key[0] > D:
            continue
        dim = len(elems)
        if out is not None and out_cols:
            vecs = _image_vectors(elems, out_cols, out.target.allowed)
            dim -= sparse_rank(_index_vectors(vecs, {}), field)
        if es is not None and inc_cols:
            skey = tuple(a - b for a, b in zip(key, inc.degree))
            selems = es.block(skey)
            if selems:
                vecs = _image_vectors(selems, inc_cols, mid.allowed)
                dim -= sparse_rank(_index_vectors(vecs, {}), field)
        if dim:
            by_block[key] = dim
    dims = tuple(sum(v for k, v in by_block.items() if k[0] <= b) for b in bounds)
    return HomologyDims(bounds, dims, by_block)


def _all_elems(mod: FreeModule, D: int):
    out = []
    for slot in range(mod.rank):
        for d in range(0, D + 1):
            for m in monomials_of_degree(mod.n, d):
                if mod.allowed(m):
                    out.append((slot, m))
    return out


def _ungraded_homology(mid, out, inc, bounds, field, slack) -> HomologyDims:
    dims = []
    out_cols = out.columns() if out is not None else {}
    inc_cols = inc.columns() if inc is not None else {}
    if slack is None:
        slack = 0
        for e in (inc.entries.values() if inc is not None else ()):
            slack = max(slack, e.degree())
    for D in bounds:
        elems = _all_elems(mid, D)
        dim = len(elems)
        if out_cols:
            vecs = _image_vectors(elems, out_cols, out.target.allowed)
            dim -= sparse_rank(_index_vectors(vecs, {}), field)
        if inc_cols:
            selems = _all_elems(inc.source, D + slack)
            vecs = _image_vectors(selems, inc_cols, mid.allowed)
            full = sparse_rank(_index_vectors(vecs, {}), field)
            high = [{k: c for k, c in v.items() if sum(k[1]) > D} for v in vecs]
            dim -= full - sparse_rank(_index_vectors(high, {}), field)
        dims.append(dim)
    return HomologyDims(bounds, tuple(dims), {})


# ----------------------------------------------------- induced maps on homology

def induced_rank(mid1: FreeModule, out1: Optional[PolyMap], mid2: FreeModule, inc2: Optional[PolyMap],
                 chain: PolyMap, grading: Grading, D: Optional[int] = None, field: Field = QQ) -> Dict[Tuple, int]:
    """Per block of mid1: rank of the map H(mid1) -> H(mid2) induced by ``chain``.

    Used for finite-dimensional (max_exp) modules; every block is included
    when D is None."""
    em = _Enumerator(mid1, grading)
    lo = min((s[0] for s in mid1.shifts), default=Fraction(0))
    hi = Fraction(D) if D is not None else lo + _finite_span(mid1, grading)
    em.fill(lo, hi)
    out_cols = out1.columns() if out1 is not None else {}
    ch_cols = chain.columns()
    inc_cols = inc2.columns() if inc2 is not None else {}
    es = None
    if inc2 is not None:
        es = _Enumerator(inc2.source, grading)
        slo = min((s[0] for s in inc2.source.shifts), default=Fraction(0))
        es.fill(slo, slo + _finite_span(inc2.source, grading) + 1)
    res = {}
    for key, elems in em.blocks.items():
        # cycles of block
        if out_cols:
            vecs = _image_vectors(elems, out_cols, out1.target.allowed)
            idx: Dict = {}
            rows = _index_vectors(vecs, idx)
            mat = [[r.get(c, 0) for r in rows] for c in range(len(idx))]
            if mat:
                _, ker = exact_rank_kernel(mat, field)
            else:
                ker = [[1 if i == j else 0 for j in range(len(elems))] for i in range(len(elems))]
        else:
            ker = [[1 if i == j else 0 for j in range(len(elems))] for i in range(len(elems))]
        if not ker:
            continue
        imgs = _image_vectors(elems, ch_cols, mid2.allowed)
        zvecs = []
        for kv in ker:
            acc: Dict = {}
            for coef, img in zip(kv, imgs):
                if coef:
                    for k, c in img.items():
                        acc[k] = acc.get(k, 0) + coef * c
            zvecs.append({k: c for k, c in acc.items() if c})
        bvecs = []
        if es is not None and inc_cols:
            tkey = tuple(a + b for a, b in zip(key, chain.degree))
            skey = tuple(a - b for a, b in zip(tkey, inc2.degree))
            bvecs = _image_vectors(es.block(skey), inc_cols, mid2.allowed)
        idx2: Dict = {}
        brows = _index_vectors(bvecs, idx2)
        zrows = _index_vectors(zvecs, idx2)
        r = sparse_rank(brows + zrows, field) - sparse_rank(brows, field)
        if r:
            res[key] = r
    return res


def _finite_span(mod: FreeModule, grading: Grading) -> Fraction:
    if mod.max_exp is None:
        raise ValueError("module is not finite dimensional")
    top = sum((mod.max_exp - 1) * w for w in grading.primary)
    span = max((s[0] for s in mod.shifts), default=Fraction(0)) - min((s[0] for s in mod.shifts), default=Fraction(0))
    return Fraction(top) + span
