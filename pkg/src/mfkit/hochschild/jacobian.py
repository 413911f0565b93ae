"""Milnor numbers, the Jacobian ring and its socle pairing."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..exactalg import QQ, Field, MultiPoly, Ring, monomials_of_degree, monomials_up_to, rank, sparse_rank
from ..homalg.complexes import FreeModule, PolyMap, homology
from ..homalg.grading import infer_weights, poly_grading

DEFAULT_D = 16


class JacobianError(ValueError):
    pass


@dataclass
class MilnorResult:
    value: int
    stabilized: bool
    D_used: int
    certificate: List[int] = field(default_factory=list)

    @property
    def isolated(self) -> bool:
        return self.stabilized

    def to_json(self, key: str = "milnor") -> dict:
        if not self.stabilized:
            return {key: None, "stabilized": False, "status": "not isolated at this bound",
                    "D_used": self.D_used, "certificate": self.certificate}
        return {key: self.value, "stabilized": True, "D_used": self.D_used,
                "certificate": self.certificate}


def _check_nonconstant(f: MultiPoly):
    if f.is_constant():
        raise JacobianError("potential must be non-constant")


def _local_dim(f: MultiPoly, D: int, partials, keyfun, field: Field) -> int:
    """dim k[x]/(J + m^(D+1)).  Rows x^a * df/dx_i cut at total degree D stay
    inside one grading block, so the count splits blockwise."""
    n = f.ring.n
    monos = monomials_up_to(n, D)
    blocks: Dict = {}
    for m in monos:
        blocks.setdefault(keyfun(m), []).append(m)
    rows_by_block: Dict = {}
    for g in partials:
        if not g:
            continue
        lo = g.low_degree()
        for m in monomials_up_to(n, D - lo):
            row = {}
            for mm, c in g.terms.items():
                t = tuple(a + b for a, b in zip(m, mm))
                if sum(t) <= D:
                    row[t] = c
            if row:
                k = keyfun(next(iter(row)))
                rows_by_block.setdefault(k, []).append(row)
    total = 0
    for k, ms in blocks.items():
        idx = {m: i for i, m in enumerate(ms)}
        rows = [{idx[t]: c for t, c in r.items()} for r in rows_by_block.get(k, [])]
        total += len(ms) - (sparse_rank(rows, field) if rows else 0)
    return total


def milnor_number(f: MultiPoly, D_max: int = DEFAULT_D, field: Field = QQ) -> MilnorResult:
    """Local Milnor number at the origin: dim of k[x]/(J + m^(D+1)) for D = 0, 1, ...

    The sequence is the Hilbert-Samuel function of the local Jacobian
    algebra, so once it repeats it is constant; we stop after three equal
    values (the certificate).  For quasi-homogeneous f this is the full
    dim k[x]/(df)."""
    _check_nonconstant(f)
    partials = [f.diff(i) for i in range(f.ring.n)]
    gd = poly_grading(f)
    keyfun = gd[0].mono_key if gd else (lambda m: ())
    seq: List[int] = []
    for D in range(0, D_max + 1):
        seq.append(_local_dim(f, D, partials, keyfun, field))
        if D >= 2 and seq[-1] == seq[-2] == seq[-3]:
            return MilnorResult(seq[-1], True, D, seq[-3:])
    return MilnorResult(seq[-1], False, D_max, seq[-3:])


def global_jacobian_dim(f: MultiPoly, D_max: int = DEFAULT_D, field: Field = QQ) -> MilnorResult:
    """dim k[x]/(df) over all critical points (no localization).

    Runs the homology engine on R^n -> R, (g_i) -> sum g_i df/dx_i: exact
    blocks when f is quasi-homogeneous, total-degree truncation otherwise."""
    _check_nonconstant(f)
    R = f.ring
    n = R.n
    partials = [f.diff(i) for i in range(n)]
    gd = poly_grading(f)
    if gd is not None:
        grading, fdeg = gd
        zero = tuple(0 for _ in grading.rows)
        src_shifts = []
        for g in partials:
            k = grading.poly_key(g) if g else None
            src_shifts.append(tuple(k) if k is not None else zero)
        mid = FreeModule(n, ["R"], [zero])
        src = FreeModule(n, [("d", i) for i in range(n)], src_shifts)
        inc = PolyMap(src, mid, {(0, i): g for i, g in enumerate(partials) if g}, zero)
        hd = homology(mid, None, inc, grading, D_max, field)
    else:
        mid = FreeModule(n, ["R"], [()])
        src = FreeModule(n, [("d", i) for i in range(n)], [()] * n)
        inc = PolyMap(src, mid, {(0, i): g for i, g in enumerate(partials) if g}, ())
        hd = homology(mid, None, inc, None, D_max, field)
    return MilnorResult(hd.value, hd.stabilized, D_max, list(hd.dims))


def thom_sebastiani_sum(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """f(x) + g(y) on the product, renaming g's variables away from f's."""
    names = list(f.ring.names)
    ren = []
    for v in g.ring.names:
        new = v
        k = 1
        while new in names:
            new = f"{v}{k}"
            k += 1
        names.append(new)
        ren.append(new)
    R = Ring(tuple(names))
    fe = f.embed(R)
    imgs = [R.var(v) for v in ren]
    ge = g.subs(imgs) if g.ring.n else MultiPoly(R, {(0,) * R.n: g.constant_term()})
    return fe + ge


# ------------------------------------------------------------------ Jacobian ring

class JacobianRing:
    """k[x]/(df) for quasi-homogeneous f with an isolated singularity.

    Each weighted-degree block is reduced to row echelon form with columns in
    descending grlex order; the non-pivot monomials form the basis and every
    polynomial has a unique normal form in their span."""

    def __init__(self, f: MultiPoly, weights: Optional[Tuple[int, ...]] = None, D_max: Optional[int] = None,
                 field: Field = QQ):
        _check_nonconstant(f)
        if not field.is_rational:
            raise JacobianError("the Jacobian ring is computed over Q")
        w = tuple(weights) if weights is not None else infer_weights(f)
        if w is None or not f.is_homogeneous(w):
            raise JacobianError("f is not quasi-homogeneous for any positive weights")
        self.f = f
        self.weights = w
        self.n = f.ring.n
        self.fdeg = f.degree(w)
        self.partials = [f.diff(i) for i in range(self.n)]
        # the socle of a graded complete intersection sits in degree sum(d - 2 w_i)
        self.bound = D_max if D_max is not None else sum(self.fdeg - 2 * x for x in w) + 3
        self._blocks: Dict[int, Tuple[List, Dict, List]] = {}
        for e in range(0, self.bound + 1):
            self._blocks[e] = self._reduce_block(e)
        tail = [len(self._blocks[e][2]) for e in range(max(0, self.bound - 2), self.bound + 1)]
        self.stabilized = all(t == 0 for t in tail)

    def _reduce_block(self, e: int):
        R = self.f.ring
        monos = sorted(monomials_of_degree(self.n, e, self.weights), key=lambda m: (sum(m), m), reverse=True)
        col = {m: i for i, m in enumerate(monos)}
        rows = []
        for g in self.partials:
            if not g:
                continue
            ge = g.degree(self.weights)
            for m in monomials_of_degree(self.n, e - ge, self.weights):
                r = [Fraction(0)] * len(monos)
                for mm, c in g.terms.items():
                    r[col[tuple(a + b for a, b in zip(m, mm))]] += c
                rows.append(r)
        ech, piv = _rref(rows, len(monos))
        basis = [m for i, m in enumerate(monos) if i not in set(piv)]
        return monos, {"rows": ech, "piv": piv, "col": col}, basis

    @property
    def basis(self) -> List[Tuple[int, ...]]:
        out = []
        for e in range(self.bound + 1):
            out.extend(self._blocks[e][2])
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    def normal_form(self, g: MultiPoly) -> Dict[Tuple[int, ...], Fraction]:
        """Coordinates of g mod (df) in the monomial basis."""
        out: Dict[Tuple[int, ...], Fraction] = {}
        by_deg: Dict[int, Dict] = {}
        for m, c in g.terms.items():
            by_deg.setdefault(sum(a * w for a, w in zip(m, self.weights)), {})[m] = c
        for e, part in by_deg.items():
            if e > self.bound:
                if not self.stabilized:
                    raise JacobianError("degree beyond the computed range")
                continue
            monos, data, basis = self._blocks[e]
            col = data["col"]
            vec = [Fraction(0)] * len(monos)
            for m, c in part.items():
                vec[col[m]] += c
            for r, pc in zip(data["rows"], data["piv"]):
                if vec[pc]:
                    t = vec[pc]
                    vec = [x - t * y for x, y in zip(vec, r)]
            for i, m in enumerate(monos):
                if vec[i]:
                    out[m] = vec[i]
        return out

    def multiply(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
        R = self.f.ring
        return self.normal_form(R.monomial(tuple(x + y for x, y in zip(a, b))))

    def multiplication_table(self) -> Dict[Tuple, Dict]:
        B = self.basis
        return {(a, b): self.multiply(a, b) for a in B for b in B}

    def socle(self) -> List[Tuple[int, ...]]:
        top = max((e for e in range(self.bound + 1) if self._blocks[e][2]), default=0)
        return list(self._blocks[top][2])


def _rref(rows: List[List[Fraction]], ncols: int):
    rows = [r[:] for r in rows]
    piv: List[int] = []
    out: List[List[Fraction]] = []
    for c in range(ncols):
        k = next((i for i, r in enumerate(rows) if r[c]), None)
        if k is None:
            continue
        r = rows.pop(k)
        pv = r[c]
        r = [x / pv for x in r]
        rows = [[x - s[c] * y for x, y in zip(s, r)] if s[c] else s for s in rows]
        out = [[x - s[c] * y for x, y in zip(s, r)] if s[c] else s for s in out]
        out.append(r)
        piv.append(c)
    return out, piv


@dataclass
class SoclePairing:
    basis: List[Tuple[int, ...]]
    socle: Tuple[int, ...]
    matrix: List[List[Fraction]]
    nondegenerate: bool

    def to_json(self, ring: Ring) -> dict:
        return {"basis": [str(ring.monomial(m)) for m in self.basis], "socle": str(ring.monomial(self.socle)),
                "matrix": [[str(x) for x in row] for row in self.matrix], "nondegenerate": self.nondegenerate,
                "rank": rank(self.matrix) if self.matrix else 0}


def socle_pairing(f: MultiPoly, weights: Optional[Tuple[int, ...]] = None) -> SoclePairing:
    """<a, b> = coefficient of the socle monomial in a*b reduced in Jac(f)."""
    J = JacobianRing(f, weights)
    if not J.stabilized:
        raise JacobianError("Jacobian ring is not finite: singularity not isolated")
    soc = J.socle()
    if len(soc) != 1:
        raise JacobianError(f"socle has dimension {len(soc)}, expected 1 (not isolated?)")
    s = soc[0]
    B = J.basis
    M = [[J.multiply(a, b).get(s, Fraction(0)) for b in B] for a in B]
    return SoclePairing(B, s, M, rank(M) == len(B))
