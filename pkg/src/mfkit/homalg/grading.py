"""Diagonal gradings: weight vectors under which f and a family of factorizations are homogeneous.

A grading row assigns a weight to every variable and an internal shift to
every basis vector so that the odd operator d is homogeneous of degree h.
The first row (primary) has positive integer weights; it makes every
degree block finite.  Further rows only refine blocks.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactalg import MultiPoly, Ring, exact_rank_kernel
from ..mfcore import MatrixFactorization


@dataclass(frozen=True)
class Grading:
    rows: Tuple[Tuple[int, ...], ...]   # integer weights per row; row 0 positive

    @property
    def primary(self) -> Tuple[int, ...]:
        return tuple(int(w) for w in self.rows[0])

    def mono_key(self, m) -> Tuple[int, ...]:
        return tuple(sum([a * w for a, w in zip(m, row)]) for row in self.rows)

    def poly_key(self, f: MultiPoly):
        keys = {self.mono_key(m) for m in f.terms}
        return keys.pop() if len(keys) == 1 else None


def _lcm(a, b):
    return a * b // gcd(a, b)


def integer_normalize(ws: Sequence[Fraction]) -> Tuple[int, ...]:
    den = reduce(_lcm, (Fraction(w).denominator for w in ws), 1)
    ints = [int(Fraction(w) * den) for w in ws]
    g = reduce(gcd, ints, 0) or 1
    return tuple(i // g for i in ints)


def infer_weights(f: MultiPoly) -> Optional[Tuple[int, ...]]:
    """Positive integer weights making f quasi-homogeneous, or None.

    Solves w.e = 1 over the exponent vectors e of f; among the solutions the
    minimal-norm one is taken (exact pseudo-inverse).  User weights stored on
    the ring win if f is homogeneous for them."""
    R = f.ring
    if R.weights is not None:
        return R.weights if f.is_homogeneous(R.weights) else None
    if f.is_zero() or R.n == 0:
        return (1,) * R.n if R.n else ()
    exps = [list(m) for m in f.terms]
    if any(not any(e) for e in exps):
        return None
    # independent rows
    basis: List[List[int]] = []
    from ..exactalg import rank
    for e in exps:
        if rank(basis + [e]) > len(basis):
            basis.append(e)
    k = len(basis)
    gram = [[Fraction(sum(a * b for a, b in zip(basis[i], basis[j]))) for j in range(k)] for i in range(k)]
    y = _solve(gram, [Fraction(1)] * k)
    w = [sum((basis[i][v] * y[i] for i in range(k)), Fraction(0)) for v in range(R.n)]
    if any(sum(a * b for a, b in zip(e, w)) != 1 for e in exps):
        return None
    if any(x <= 0 for x in w):
        return None
    return integer_normalize(w)


def _solve(a: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c])
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                t = m[i][c]
                m[i] = [x - t * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def _bfs_shifts(d: Dict[Tuple[int, int], MultiPoly], size: int, weights, h) -> Optional[List[Fraction]]:
    """Shifts s with w.m + s_i - s_j = h for every entry d[i, j] and monomial m."""
    adj: Dict[int, List[Tuple[int, Fraction]]] = {i: [] for i in range(size)}
    for (i, j), e in d.items():
        degs = {sum((a * w for a, w in zip(m, weights)), Fraction(0)) for m in e.terms}
        if len(degs) != 1:
            return None
        t = degs.pop()
        # s_i = s_j + h - t
        adj[j].append((i, h - t))
        adj[i].append((j, t - h))
    s: List[Optional[Fraction]] = [None] * size
    for root in range(size):
        if s[root] is not None:
            continue
        s[root] = Fraction(0)
        dq = deque([root])
        while dq:
            j = dq.popleft()
            for i, delta in adj[j]:
                val = s[j] + delta
                if s[i] is None:
                    s[i] = val
                    dq.append(i)
                elif s[i] != val:
                    return None
    return s  # type: ignore


def _independent_integral(vectors: List[List[Fraction]]) -> List[List[int]]:
    """Greedy maximal independent subset, each vector scaled to integers."""
    from ..exactalg import rank
    kept: List[List[Fraction]] = []
    for v in vectors:
        if rank(kept + [v]) > len(kept):
            kept.append(v)
    out = []
    for v in kept:
        den = reduce(_lcm, (Fraction(x).denominator for x in v), 1)
        out.append([int(Fraction(x) * den) for x in v])
    return out


def _odd_entries(m: MatrixFactorization) -> Dict[Tuple[int, int], MultiPoly]:
    d = m.odd_operator()
    return {(i, j): e for i, j, e in d.nonzero()}


@dataclass(frozen=True)
class MFGrading:
    grading: Grading
    h: Tuple[Fraction, ...]                        # degree of d per row
    shifts: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]   # per MF, per basis vector, per row


def mf_grading(f: MultiPoly, mfs: Sequence[MatrixFactorization]) -> Optional[MFGrading]:
    """Common grading for f and the given factorizations (all over f's ring), or None."""
    R = f.ring
    prim = infer_weights(f)
    if prim is None or R.n == 0:
        return None
    wf = [Fraction(x) for x in prim]
    h0 = Fraction(f.degree(prim), 2) if f else Fraction(0)
    if not f:
        # any degree for d works; take it from a nonzero entry when homogeneous
        h0 = None
    entries = [_odd_entries(m) for m in mfs]
    if h0 is None:
        for ents in entries:
            for e in ents.values():
                if e.is_homogeneous(prim):
                    h0 = Fraction(e.degree(prim))
                    break
            if h0 is not None:
                break
        if h0 is None:
            h0 = Fraction(0)
    prim_shifts = []
    for m, ents in zip(mfs, entries):
        s = _bfs_shifts(ents, 2 * m.rank, wf, h0)
        if s is None:
            return None
        prim_shifts.append(s)
    # secondary rows: kernel of the joint homogeneity system
    n = R.n
    offsets = []
    tot = n + 1
    for m in mfs:
        offsets.append(tot)
        tot += 2 * m.rank
    eqs = []
    for m, ents, off in zip(mfs, entries, offsets):
        for (i, j), e in ents.items():
            for mono in e.terms:
                row = [Fraction(0)] * tot
                for v, a in enumerate(mono):
                    row[v] += a
                row[off + i] += 1
                row[off + j] -= 1
                row[n] -= 1
                eqs.append(row)
    for mono in f.terms:
        row = [Fraction(0)] * tot
        for v, a in enumerate(mono):
            row[v] += a
        row[n] -= 2
        eqs.append(row)
    primary = [Fraction(x) for x in wf] + [h0]
    for k, off in enumerate(offsets):
        primary += prim_shifts[k]
    cands = [primary]
    if eqs:
        _, ker = exact_rank_kernel(eqs)
        cands += [vec for vec in ker if any(vec[:n + 1])]   # drop pure shift gauges
    vecs = _independent_integral(cands)
    rows = [tuple(v[:n]) for v in vecs]
    hs = [v[n] for v in vecs]
    shifts = []
    for k, (m, off) in enumerate(zip(mfs, offsets)):
        shifts.append(tuple(tuple(v[off + b] for v in vecs) for b in range(2 * m.rank)))
    return MFGrading(Grading(tuple(rows)), tuple(hs), tuple(shifts))


def poly_grading(f: MultiPoly) -> Optional[Tuple[Grading, Tuple[Fraction, ...]]]:
    """Grading rows making f homogeneous; returns (grading, degree of f per row)."""
    R = f.ring
    prim = infer_weights(f)
    if prim is None:
        return None
    n = R.n
    cands = [[Fraction(x) for x in prim] + [Fraction(f.degree(prim)) if f else Fraction(0)]]
    eqs = [[Fraction(a) for a in mono] + [Fraction(-1)] for mono in f.terms]
    if eqs:
        _, ker = exact_rank_kernel(eqs)
        cands += [vec for vec in ker if any(vec[:n])]
    vecs = _independent_integral(cands) if n else [[0]]
    return Grading(tuple(tuple(v[:n]) for v in vecs)), tuple(v[n] for v in vecs)
