"""End of the residue field of a quadric via its u-resolution.

Over A = k[x]/(q) the residue field k has the resolution

    P = A[e_1..e_n, u],  e_i odd of homological degree 1, u even of degree 2,
    d = i_E + dq ^ d/du     (d e_i = x_i,  d u = dq = sum dq/dx_j e_j),

with an honest polynomial variable u (k! is invertible in char 0, so the
divided powers u^k/k! are not needed; this rescales du from dq/2 to dq).
d^2 = 2q d/du = 0 in A.  Each v in k^n gives an odd A-linear derivation

    theta_v(e_i) = v_i,   theta_v(u) = -sum_j (Qv)_j e_j,

with theta_v d + d theta_v = 0 and theta_v theta_w + theta_w theta_v = -2 Q(v, w) d/du,
so v -> theta_v, beta -> d/du realizes the Clifford relations.  Because
d(P) lies in m P, Hom_A(P, k) has zero differential and equals Ext_A(k, k);
a class is read off as eps o phi (eps = constant coefficient of e_0 u^0).
Truncating u^k to k < N is the beta^N slice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactalg import MultiPoly, exact_rank_kernel, monomials_of_degree, rank
from ..hochschild.forms import insert_index
from .algebra import Basis, CliffordAlgebra, CliffordError, QuadraticForm

Key = Tuple[Tuple[int, ...], int]          # (T, l) for e_T u^l
Elem = Dict[Key, MultiPoly]


class UResolution:
    def __init__(self, Q: QuadraticForm, N: int, D: int, u_sign: int = -1):
        if N < 1 or D < 0:
            raise CliffordError("need N >= 1 and D >= 0")
        if not Q.nondegenerate:
            raise CliffordError("quadratic form is degenerate")
        self.form = Q
        self.N, self.D = N, D
        self.n = Q.n
        self.R = Q.ring
        self.q = Q.polynomial()
        self.dq = [self.q.diff(j) for j in range(self.n)]
        lead = self.q.sorted_terms()[0]
        self._lm, self._lc = lead[0], lead[1]
        self.x = [self.R.var(v) for v in self.R.names]
        self.u_sign = u_sign            # theta_v(u) = u_sign * sum (Qv)_j e_j

    # ------------------------------------------------------------ arithmetic
    def reduce(self, g: MultiPoly) -> MultiPoly:
        """Normal form modulo the principal ideal (q)."""
        lm, lc = self._lm, self._lc
        terms = dict(g.terms)
        out: Dict = {}
        while terms:
            m = max(terms, key=lambda t: (sum(t), t))
            c = terms.pop(m)
            if all(a >= b for a, b in zip(m, lm)):
                shift = tuple(a - b for a, b in zip(m, lm))
                f = c / lc
                for mm, cc in self.q.terms.items():
                    t = tuple(a + b for a, b in zip(mm, shift))
                    if t == m:
                        continue
                    v = terms.get(t, 0) - f * cc
                    if v:
                        terms[t] = v
                    else:
                        terms.pop(t, None)
            else:
                out[m] = c
        return MultiPoly(self.R, out)

    def standard(self, m) -> bool:
        return not all(a >= b for a, b in zip(m, self._lm))

    @staticmethod
    def _add(out: Elem, key: Key, g: MultiPoly):
        if not g:
            return
        h = out[key] + g if key in out else g
        if h:
            out[key] = h
        else:
            out.pop(key, None)

    def _clean(self, el: Elem) -> Elem:
        out = {}
        for k, g in el.items():
            g = self.reduce(g)
            if g:
                out[k] = g
        return out

    # ------------------------------------------------------------- operators
    def d(self, el: Elem) -> Elem:
        out: Elem = {}
        for (T, l), g in el.items():
            for pos, i in enumerate(T):
                self._add(out, (T[:pos] + T[pos + 1:], l), g * self.x[i] * (-1 if pos % 2 else 1))
            if l:
                for j in range(self.n):
                    ins = insert_index(j, T)
                    if ins is not None and self.dq[j]:
                        s, J = ins
                        self._add(out, (J, l - 1), g * self.dq[j] * (s * l))
        return self._clean(out)

    def theta(self, v: Sequence, el: Elem) -> Elem:
        Qv = [sum((self.form.Q[j][k] * v[k] for k in range(self.n)), Fraction(0)) for j in range(self.n)]
        out: Elem = {}
        for (T, l), g in el.items():
            for pos, i in enumerate(T):
                if v[i]:
                    self._add(out, (T[:pos] + T[pos + 1:], l), g * (v[i] * (-1 if pos % 2 else 1)))
            if l:
                for j in range(self.n):
                    ins = insert_index(j, T)
                    if ins is not None and Qv[j]:
                        s, J = ins
                        self._add(out, (J, l - 1), g * (self.u_sign * Qv[j] * s * l))
        return out

    def gen(self, i: int, el: Elem) -> Elem:
        v = [Fraction(0)] * self.n
        v[i] = Fraction(1)
        return self.theta(v, el)

    def du(self, el: Elem) -> Elem:
        out: Elem = {}
        for (T, l), g in el.items():
            if l:
                self._add(out, (T, l - 1), g * l)
        return out

    def clifford_operator(self, b: Basis, el: Elem) -> Elem:
        """theta_{s1} ... theta_{sm} (d/du)^k applied to el (rightmost first)."""
        S, k = b
        for _ in range(k):
            el = self.du(el)
        for i in reversed(S):
            el = self.gen(i, el)
        return el

    @staticmethod
    def eps(el: Elem) -> Fraction:
        g = el.get(((), 0))
        return g.constant_term() if g is not None else Fraction(0)

    # --------------------------------------------------------------- bases
    def keys(self) -> List[Key]:
        return [(T, l) for l in range(self.N) for p in range(self.n + 1) for T in combinations(range(self.n), p)]

    def hdeg(self, key: Key) -> int:
        return len(key[0]) + 2 * key[1]

    def basis_elem(self, key: Key, m=None) -> Elem:
        m = m if m is not None else (0,) * self.n
        return {key: self.R.monomial(m)}

    def truncation(self) -> List[Tuple[Key, Tuple[int, ...]]]:
        """m e_T u^l with m standard and internal degree deg m + |T| + 2l <= D."""
        out = []
        for key in self.keys():
            h = self.hdeg(key)
            for s in range(0, self.D - h + 1):
                out.extend((key, m) for m in monomials_of_degree(self.n, s) if self.standard(m))
        return out

    # ---------------------------------------------------------- identities
    def check_d_squared(self) -> bool:
        return all(not self.d(self.d(self.basis_elem(k, m))) for k, m in self.truncation())

    def check_anticommute(self) -> bool:
        for k, m in self.truncation():
            x = self.basis_elem(k, m)
            dx = self.d(x)
            for i in range(self.n):
                tot = dict(self.gen(i, dx))
                for kk, g in self.d(self.gen(i, x)).items():
                    self._add(tot, kk, g)
                if self._clean(tot):
                    return False
        return True

    def check_relations(self) -> bool:
        """theta_i theta_j + theta_j theta_i = -2 Q_ij d/du, exactly, on every e_T u^l."""
        for key in self.keys():
            x = self.basis_elem(key)
            for i in range(self.n):
                for j in range(i, self.n):
                    tot = dict(self.gen(i, self.gen(j, x)))
                    for kk, g in self.gen(j, self.gen(i, x)).items():
                        self._add(tot, kk, g)
                    for kk, g in self.du(x).items():
                        self._add(tot, kk, g * (2 * self.form.Q[i][j]))
                    if tot:
                        return False
        return True

    def resolution_defects(self) -> Dict[Tuple[int, int], int]:
        """Nonzero homology of the truncated resolution per (homological degree j,
        internal degree t <= D), for 0 <= j <= 2N - 2.  Expected: only H_0 = k at t = 0."""
        def block(j, t):
            out = []
            for key in self.keys():
                if self.hdeg(key) != j:
                    continue
                for m in monomials_of_degree(self.n, t - j) if t >= j else []:
                    if self.standard(m):
                        out.append((key, m))
            return out

        def dmat(src, tgt):
            idx = {b: i for i, b in enumerate(tgt)}
            rows = []
            for key, m in src:
                img = self.d(self.basis_elem(key, m))
                row = [Fraction(0)] * len(tgt)
                for kk, g in img.items():
                    for mm, c in g.terms.items():
                        row[idx[(kk, mm)]] += c
                rows.append(row)
            return rows

        defects = {}
        for t in range(self.D + 1):
            blocks = {j: block(j, t) for j in range(0, 2 * self.N)}
            ranks = {}
            for j in range(1, 2 * self.N):
                m = dmat(blocks[j], blocks[j - 1])
                ranks[j] = rank(m) if m and blocks[j - 1] else 0
            for j in range(0, 2 * self.N - 1):
                h = len(blocks[j]) - ranks.get(j, 0) - ranks.get(j + 1, 0)
                expect = 1 if (j == 0 and t == 0) else 0
                if h != expect:
                    defects[(j, t)] = h
        return defects


@dataclass
class CliffordEndResult:
    N: int
    D: int
    degree_dims: Dict[int, int]
    dims: Tuple[int, int]
    clifford_dims: Tuple[int, int]
    products: Dict[Tuple[int, int], Dict[Basis, Fraction]]
    expected_products: Dict[Tuple[int, int], Dict[Basis, Fraction]]
    checks: Dict[str, bool] = field(default_factory=dict)
    defects: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.dims == self.clifford_dims and all(self.checks.values())
                and self.products == self.expected_products)


def _solve_classes(M: List[List[Fraction]], w: List[Fraction]) -> Optional[List[Fraction]]:
    """c with sum_r c_r M[r] = w (M square, invertible)."""
    n = len(M)
    aug = [[M[r][c] for r in range(n)] + [w[c]] for c in range(n)]
    rk, ker = exact_rank_kernel([row[:n] for row in aug])
    if rk < n:
        return None
    # Gauss-Jordan on the augmented system
    a = [row[:] for row in aug]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c])
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                t = a[i][c]
                a[i] = [x - t * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def mf_end_algebra(Q: QuadraticForm, N: int = 4, D: int = 8) -> CliffordEndResult:
    """Ext_A(k, k) mod beta^N from the u-resolution, with the generator products
    expressed in the Clifford basis."""
    P = UResolution(Q, N, D)
    alg = CliffordAlgebra(Q)
    defects = P.resolution_defects()
    if defects:
        raise CliffordError(f"truncated resolution is not exact ({defects}); raise N or D")
    keys = P.keys()
    by_deg: Dict[int, List[Key]] = {}
    for k in keys:
        by_deg.setdefault(P.hdeg(k), []).append(k)
    # the Clifford basis e_S beta^k has the same index set (S, k) as e_T u^l
    Ms: Dict[int, List[List[Fraction]]] = {}
    invertible = True
    for j, ks in by_deg.items():
        M = [[P.eps(P.clifford_operator(b, P.basis_elem(t))) for t in ks] for b in ks]
        Ms[j] = M
        invertible &= rank(M) == len(ks)
    degree_dims = {j: len(ks) for j, ks in sorted(by_deg.items())}
    ev = sum(v for j, v in degree_dims.items() if j % 2 == 0)
    od = sum(v for j, v in degree_dims.items() if j % 2 == 1)
    products, expected = {}, {}
    if invertible and N >= 2:
        ks = by_deg.get(2, [])
        for a in range(Q.n):
            for b in range(Q.n):
                w = [P.eps(P.gen(a, P.gen(b, P.basis_elem(t)))) for t in ks]
                c = _solve_classes(Ms[2], w)
                products[(a, b)] = {bk: v for bk, v in zip(ks, c) if v} if c is not None else {}
                expected[(a, b)] = alg.truncate(alg.mul(alg.gen(a), alg.gen(b)), N)
    checks = {"d_squared": P.check_d_squared(), "anticommute": P.check_anticommute(),
              "relations": P.check_relations(), "pairing_invertible": invertible}
    return CliffordEndResult(N, D, degree_dims, (ev, od), alg.dims(N), products, expected, checks, defects)


def compare_clifford(Q: QuadraticForm, N: int = 4, D: int = 8) -> bool:
    return mf_end_algebra(Q, N, D).ok
