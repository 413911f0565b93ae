"""Exact rank and kernel computations.

``exact_rank_kernel`` is dense Bareiss elimination.  ``sparse_rank`` is the
fraction-free sparse variant used on the (large, very sparse) degree blocks
of the homology engine: rows stay integral and are divided by their content
after each update, so no rationals are ever formed.  Over GF(p) both
reduce to ordinary modular elimination.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence, Tuple

from .scalars import QQ, Field, as_fraction

SparseRow = Dict[int, int]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integral_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators (rank/kernel unchanged)."""
    out = []
    for r in rows:
        fr = [as_fraction(x) for x in r]
        den = 1
        for x in fr:
            den = _lcm(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def _bareiss_echelon(a: List[List[int]]) -> Tuple[int, List[int], List[List[int]]]:
    """In-place Bareiss forward elimination with row pivoting.

    Returns (rank, pivot columns, echelon rows)."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, nrows):
            b = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c, ncols):
                row_i[j] = (pv * row_i[j] - b * row_r[j]) // prev
        prev = pv
        pivots.append(c)
        r += 1
    return r, pivots, a[:r]


def _modp_echelon(a: List[List[int]], p: int):
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] % p:
                b = a[i][c]
                a[i] = [(x - b * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return r, pivots, a[:r]


def exact_rank_kernel(m: Sequence[Sequence], field: Field = QQ):
    """Rank and a kernel basis of a matrix given as a list of rows.

    Over Q the kernel vectors are Fractions, over GF(p) ints in [0, p).
    """
    rows = [list(r) for r in m]
    ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return _unit_kernel(ncols, field)
    if field.is_rational:
        rank, pivots, ech = _bareiss_echelon(integral_rows(rows))
        # back substitution on the echelon form, exact over Q
        kernel = []
        free = [c for c in range(ncols) if c not in set(pivots)]
        for fc in free:
            v = [Fraction(0)] * ncols
            v[fc] = Fraction(1)
            for k in range(rank - 1, -1, -1):
                pc = pivots[k]
                s = sum((ech[k][j] * v[j] for j in range(pc + 1, ncols) if ech[k][j]), Fraction(0))
                v[pc] = -s / ech[k][pc]
            kernel.append(v)
        return rank, kernel
    p = field.p
    rank, pivots, ech = _modp_echelon([[field.element(x) for x in r] for r in rows], p)
    kernel = []
    pset = set(pivots)
    for fc in (c for c in range(ncols) if c not in pset):
        v = [0] * ncols
        v[fc] = 1
        for k, pc in enumerate(pivots):
            v[pc] = (-ech[k][fc]) % p
        kernel.append(v)
    return rank, kernel


def _unit_kernel(ncols, field):
    one = Fraction(1) if field.is_rational else 1
    zero = Fraction(0) if field.is_rational else 0
    return 0, [[one if i == j else zero for j in range(ncols)] for i in range(ncols)]


def rank(m: Sequence[Sequence], field: Field = QQ) -> int:
    rows = [list(r) for r in m]
    if not rows or not rows[0]:
        return 0
    if field.is_rational:
        return _bareiss_echelon(integral_rows(rows))[0]
    return _modp_echelon([[field.element(x) for x in r] for r in rows], field.p)[0]


# ---------------------------------------------------------------- sparse path

def _primitive(row: SparseRow) -> SparseRow:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def sparse_integral(row: Dict[int, object]) -> SparseRow:
    den = 1
    fr = {}
    for k, v in row.items():
        v = as_fraction(v)
        if v:
            fr[k] = v
            den = _lcm(den, v.denominator)
    return {k: int(v * den) for k, v in fr.items()}


def sparse_rank(rows: Sequence[Dict[int, object]], field: Field = QQ) -> int:
    """Rank of a sparse matrix given as a list of {column: value} rows."""
    if field.is_rational:
        work = [_primitive(sparse_integral(r)) for r in rows]
        work = [r for r in work if r]
        return _sparse_elim_int(work)
    p = field.p
    work = []
    for r in rows:
        rr = {k: field.element(v) for k, v in r.items()}
        rr = {k: v for k, v in rr.items() if v}
        if rr:
            work.append(rr)
    return _sparse_elim_modp(work, p)


def _sparse_elim_int(work: List[SparseRow]) -> int:
    # bucket rows by leading column; pivot on the shortest row per column
    rank = 0
    by_col: Dict[int, List[SparseRow]] = {}
    for r in work:
        by_col.setdefault(min(r), []).append(r)
    while by_col:
        c = min(by_col)
        bucket = by_col.pop(c)
        bucket.sort(key=len)
        piv = bucket[0]
        rank += 1
        a = piv[c]
        for r in bucket[1:]:
            b = r[c]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {k: ma * v for k, v in r.items()}
            for k, v in piv.items():
                nv = new.get(k, 0) - mb * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            new.pop(c, None)
            if new:
                new = _primitive(new)
                by_col.setdefault(min(new), []).append(new)
    return rank


def _sparse_elim_modp(work: List[SparseRow], p: int) -> int:
    rank = 0
    by_col: Dict[int, List[SparseRow]] = {}
    for r in work:
        by_col.setdefault(min(r), []).append(r)
    while by_col:
        c = min(by_col)
        bucket = by_col.pop(c)
        bucket.sort(key=len)
        piv = bucket[0]
        rank += 1
        inv = pow(piv[c], -1, p)
        for r in bucket[1:]:
            b = r[c] * inv % p
            new = dict(r)
            for k, v in piv.items():
                nv = (new.get(k, 0) - b * v) % p
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            if new:
                by_col.setdefault(min(new), []).append(new)
    return rank


def sparse_to_dense(rows: Sequence[Dict[int, object]], ncols: int) -> List[List]:
    out = []
    for r in rows:
        d = [0] * ncols
        for k, v in r.items():
            d[k] = v
        out.append(d)
    return out
