"""Matrix factorizations and the constructions on them.

A factorization (p, q) of f has even part V0 and odd part V1 with
p: V1 -> V0 and q: V0 -> V1.  Besides (p, q) each factorization carries an
integer lift of its Z/2-grading (``degrees``): V0 sits in even and V1 in
odd cohomological degrees, and every nonzero matrix entry raises or lowers
the degree by exactly one.  The raising part is the differential of a
complex of free modules, the lowering part is the homotopy B with
dB + Bd = f.  Default lift: V0 in degree 0, V1 in degree -1, so the
complex is V1 --p--> V0 and the module it presents is coker p.

Sign conventions (fixed once):

* dual:  (p, q) -> (p^T, -q^T), an MF of -f; degrees d -> 1 - d.
* shift: (p, q) -> (-q, -p); degrees d -> d - 1.
* ts_tensor: d = d_m (x) 1 + s (x) d_n with s = (-1)^{parity} on the first
  factor; degrees add.
* koszul_mf(a, b): exterior algebra, d = (a wedge) + (contract with b);
  Lambda^k sits in degree k - n, so coker p = R/(a) when a is regular.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .exactalg import MultiPoly, PolyMatrix, Ring, RingMismatch, parse_many, parse_poly


class MFError(ValueError):
    pass


class InvalidFactorization(MFError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixFactorization:
    f: MultiPoly
    p: PolyMatrix
    q: PolyMatrix
    degrees: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = field(default=None)

    def __post_init__(self):
        r = self.p.rows
        if self.p.shape != (r, r) or self.q.shape != (r, r):
            raise MFError("p and q must be square of the same size")
        if self.p.ring != self.f.ring or self.q.ring != self.f.ring:
            raise RingMismatch("f, p, q must live in one ring")
        if self.degrees is None:
            object.__setattr__(self, "degrees", ((0,) * r, (-1,) * r))
        else:
            d0, d1 = (tuple(x) for x in self.degrees)
            if len(d0) != r or len(d1) != r:
                raise MFError("one degree per basis vector required")
            object.__setattr__(self, "degrees", (d0, d1))

    @property
    def ring(self) -> Ring:
        return self.f.ring

    @property
    def rank(self) -> int:
        return self.p.rows

    def __eq__(self, other):
        # equality of the two-periodic data; the integer lift is bookkeeping
        return (isinstance(other, MatrixFactorization) and self.f == other.f
                and self.p == other.p and self.q == other.q)

    def __hash__(self):
        return hash((self.f, self.p, self.q))

    # odd operator on V = V0 + V1, basis ordered V0 then V1
    def odd_operator(self) -> PolyMatrix:
        r = self.rank
        z = self.ring.zero()
        ents = [[z] * (2 * r) for _ in range(2 * r)]
        for i, j, e in self.p.nonzero():
            ents[i][r + j] = e
        for i, j, e in self.q.nonzero():
            ents[r + i][j] = e
        return PolyMatrix(self.ring, ents)

    def basis_degrees(self) -> Tuple[int, ...]:
        return self.degrees[0] + self.degrees[1]

    def basis_parities(self) -> Tuple[int, ...]:
        return (0,) * self.rank + (1,) * self.rank

    def embed(self, ring: Ring) -> "MatrixFactorization":
        return MatrixFactorization(self.f.embed(ring), self.p.embed(ring), self.q.embed(ring), self.degrees)

    def lift_is_consistent(self) -> bool:
        """Every nonzero entry of p, q changes the integer degree by +-1."""
        d0, d1 = self.degrees
        if any(x % 2 for x in d0) or any(x % 2 == 0 for x in d1):
            return False
        for i, j, _ in self.p.nonzero():
            if abs(d0[i] - d1[j]) != 1:
                return False
        for i, j, _ in self.q.nonzero():
            if abs(d1[i] - d0[j]) != 1:
                return False
        return True

    def __repr__(self):
        return f"MF(f={self.f}, rank={self.rank}, p={self.p.to_strings()}, q={self.q.to_strings()})"


@dataclass(frozen=True)
class LGPair:
    ring: Ring
    f: MultiPoly


def identity_failure(m: MatrixFactorization) -> Optional[Tuple[str, int, int]]:
    """First entry where pq or qp differs from f*I, or None."""
    fI = PolyMatrix.scalar(m.ring, m.rank, m.f)
    for name, prod in (("pq", m.p * m.q), ("qp", m.q * m.p)):
        bad = prod.first_mismatch(fI)
        if bad is not None:
            return (name, bad[0], bad[1])
    return None


def validate(m: MatrixFactorization) -> bool:
    return identity_failure(m) is None


def require_valid(m: MatrixFactorization) -> MatrixFactorization:
    bad = identity_failure(m)
    if bad is not None:
        raise InvalidFactorization(f"factorization identity fails at ({bad[1]},{bad[2]}) [{bad[0]} != f*I]")
    return m


# --------------------------------------------------------------- constructors

def trivial_mf(f: MultiPoly) -> MatrixFactorization:
    R = f.ring
    return MatrixFactorization(f, PolyMatrix(R, [[R.one()]]), PolyMatrix(R, [[f]]))


def _subsets_by_parity(n: int, parity: int) -> List[Tuple[int, ...]]:
    out = []
    for k in range(parity, n + 1, 2):
        out.extend(combinations(range(n), k))
    return out


def koszul_mf(a: Sequence[MultiPoly], b: Sequence[MultiPoly]) -> MatrixFactorization:
    if len(a) != len(b):
        raise MFError("koszul_mf needs lists of equal length")
    if not a:
        raise MFError("koszul_mf needs at least one pair")
    R = a[0].ring
    for x in list(a) + list(b):
        if x.ring != R:
            raise RingMismatch("all Koszul entries must share a ring")
    n = len(a)
    f = R.zero()
    for ai, bi in zip(a, b):
        f = f + ai * bi
    V0 = _subsets_by_parity(n, n % 2)          # Lambda^k with k = n mod 2
    V1 = _subsets_by_parity(n, (n + 1) % 2)
    i0 = {s: i for i, s in enumerate(V0)}
    i1 = {s: i for i, s in enumerate(V1)}
    r = len(V0)
    z = R.zero()

    def apply(src: Tuple[int, ...]):
        """(a wedge) + (contract with b) applied to e_src; yields (subset, coeff)."""
        for i in range(n):
            if i not in src:
                pos = sum(1 for j in src if j < i)
                yield tuple(sorted(src + (i,))), a[i] * (-1) ** pos
        for k, i in enumerate(src):
            yield src[:k] + src[k + 1:], b[i] * (-1) ** k

    def matrix(src_basis, tgt_index):
        ents = [[z] * r for _ in range(r)]
        for j, s in enumerate(src_basis):
            for t, c in apply(s):
                if c:
                    ents[tgt_index[t]][j] = ents[tgt_index[t]][j] + c
        return PolyMatrix(R, ents)

    p = matrix(V1, i0)
    q = matrix(V0, i1)
    degrees = (tuple(len(s) - n for s in V0), tuple(len(s) - n for s in V1))
    return MatrixFactorization(f, p, q, degrees)


def split_by_first_variable(f: MultiPoly) -> List[MultiPoly]:
    """f = sum x_i f_i, each term assigned to its lowest-index variable."""
    R = f.ring
    if f.constant_term():
        raise MFError("f(0) != 0: the origin is not on the zero fiber")
    parts = [dict() for _ in range(R.n)]
    for m, c in f.terms.items():
        i = next(k for k, e in enumerate(m) if e)
        e = list(m)
        e[i] -= 1
        parts[i][tuple(e)] = c
    return [MultiPoly(R, t) for t in parts]


def stabilized_residue_field(pair) -> MatrixFactorization:
    f = pair.f if isinstance(pair, LGPair) else pair
    R = f.ring
    if R.n == 0:
        raise MFError("no variables: the residue field is the whole ring")
    fs = split_by_first_variable(f)
    return koszul_mf(R.gens(), fs)


def dual(m: MatrixFactorization) -> MatrixFactorization:
    require_valid(m)
    d0, d1 = m.degrees
    return MatrixFactorization(-m.f, m.p.transpose(), -(m.q.transpose()),
                               (tuple(1 - x for x in d1), tuple(1 - x for x in d0)))


def shift(m: MatrixFactorization) -> MatrixFactorization:
    d0, d1 = m.degrees
    return MatrixFactorization(m.f, -m.q, -m.p, (tuple(x - 1 for x in d1), tuple(x - 1 for x in d0)))


def direct_sum(m: MatrixFactorization, n: MatrixFactorization) -> MatrixFactorization:
    if m.f != n.f:
        raise MFError("direct_sum needs equal superpotentials")
    R = m.ring
    rm, rn = m.rank, n.rank

    def bd(a: PolyMatrix, b: PolyMatrix):
        z = R.zero()
        ents = [list(r) + [z] * rn for r in a.entries] + [[z] * rm + list(r) for r in b.entries]
        return PolyMatrix(R, ents)

    return MatrixFactorization(m.f, bd(m.p, n.p), bd(m.q, n.q),
                               (m.degrees[0] + n.degrees[0], m.degrees[1] + n.degrees[1]))


def _merge_rings(m: MatrixFactorization, n: MatrixFactorization, rename=None):
    """Merged ring for an external product; identical rings are treated as one."""
    if rename:
        ring = Ring(tuple(rename.get(x, x) for x in n.ring.names))
        n = MatrixFactorization(n.f.subs([ring.var(i) for i in range(ring.n)]) if n.ring.n else n.f,
                                n.p.map(lambda e: e.subs([ring.var(i) for i in range(ring.n)])),
                                n.q.map(lambda e: e.subs([ring.var(i) for i in range(ring.n)])),
                                n.degrees)
    return m.ring.merge(n.ring), n


def ts_tensor(m: MatrixFactorization, n: MatrixFactorization, rename=None) -> MatrixFactorization:
    """Thom-Sebastiani product: an MF of f(x) + g(y) on disjoint variables.

    ``rename`` maps variable names of ``n`` to new names (the only way to
    resolve clashes)."""
    ring, n = _merge_rings(m, n, rename)
    m, n = m.embed(ring), n.embed(ring)
    dm, dn = m.odd_operator(), n.odd_operator()
    pm, pn = m.basis_parities(), n.basis_parities()
    gm, gn = m.basis_degrees(), n.basis_degrees()
    N, M = 2 * n.rank, 2 * m.rank
    pairs = [(i, j) for i in range(M) for j in range(N)]
    even = [(i, j) for (i, j) in pairs if (pm[i] + pn[j]) % 2 == 0]
    odd = [(i, j) for (i, j) in pairs if (pm[i] + pn[j]) % 2 == 1]
    ie = {b: k for k, b in enumerate(even)}
    io = {b: k for k, b in enumerate(odd)}
    z = ring.zero()
    r = len(even)

    def image(i, j):
        # d(e_i (x) e_j) = d_m e_i (x) e_j + (-1)^{|i|} e_i (x) d_n e_j
        for k in range(M):
            c = dm[k, i]
            if c:
                yield (k, j), c
        sgn = -1 if pm[i] else 1
        for k in range(N):
            c = dn[k, j]
            if c:
                yield (i, k), c * sgn

    def mat(src, tgt_index):
        ents = [[z] * r for _ in range(r)]
        for col, (i, j) in enumerate(src):
            for t, c in image(i, j):
                ents[tgt_index[t]][col] = ents[tgt_index[t]][col] + c
        return PolyMatrix(ring, ents)

    p = mat(odd, ie)
    q = mat(even, io)
    degrees = (tuple(gm[i] + gn[j] for i, j in even), tuple(gm[i] + gn[j] for i, j in odd))
    return MatrixFactorization(m.f + n.f, p, q, degrees)


def hyperbolic_mf(ring: Ring, u: str, v: str) -> MatrixFactorization:
    R = Ring((u, v))
    return koszul_mf([R.var(u)], [R.var(v)])


def knorrer_double(m: MatrixFactorization, u: Optional[str] = None, v: Optional[str] = None) -> MatrixFactorization:
    """ts_tensor with the rank-one factorization (u, v) of uv in fresh variables."""
    u = u or m.ring.fresh("u")
    v = v or Ring(m.ring.names + (u,)).fresh("v")
    if u in m.ring.names or v in m.ring.names or u == v:
        raise RingMismatch(f"knorrer variables {u}, {v} are not fresh")
    return ts_tensor(m, hyperbolic_mf(m.ring, u, v))


def superpotential(m: MatrixFactorization) -> MultiPoly:
    return m.f


# ------------------------------------------------------------------- file I/O

def mf_to_json(m: MatrixFactorization) -> dict:
    doc = {"f": str(m.f), "rank": m.rank, "p": m.p.to_strings(), "q": m.q.to_strings(),
           "vars": list(m.ring.names)}
    if m.degrees != ((0,) * m.rank, (-1,) * m.rank):
        doc["degrees"] = [list(m.degrees[0]), list(m.degrees[1])]
    return doc


def mf_from_json(doc: dict, validate_identity: bool = True) -> MatrixFactorization:
    for key in ("f", "rank", "p", "q"):
        if key not in doc:
            raise MFError(f"missing key {key!r}")
    r = int(doc["rank"])
    p_s, q_s = doc["p"], doc["q"]
    for name, mat in (("p", p_s), ("q", q_s)):
        if len(mat) != r or any(len(row) != r for row in mat):
            raise MFError(f"{name} is not {r}x{r}")
    srcs = [doc["f"]] + [e for row in p_s for e in row] + [e for row in q_s for e in row]
    polys = parse_many(srcs, doc.get("vars"))
    f = polys[0]
    flat_p = polys[1:1 + r * r]
    flat_q = polys[1 + r * r:]
    p = PolyMatrix(f.ring, [flat_p[i * r:(i + 1) * r] for i in range(r)])
    q = PolyMatrix(f.ring, [flat_q[i * r:(i + 1) * r] for i in range(r)])
    degrees = doc.get("degrees")
    m = MatrixFactorization(f, p, q, None if degrees is None else (tuple(degrees[0]), tuple(degrees[1])))
    if validate_identity:
        require_valid(m)
    if not m.lift_is_consistent():
        raise MFError("degree lift inconsistent with p, q")
    return m


def read_mf(path: str) -> MatrixFactorization:
    with open(path) as fh:
        return mf_from_json(json.load(fh))


def write_mf(m: MatrixFactorization, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(mf_to_json(m), fh, indent=2, sort_keys=True)
        fh.write("\n")
