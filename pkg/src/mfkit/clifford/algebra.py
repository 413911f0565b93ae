"""Quadratic forms and their beta-graded Clifford algebras.

Convention: q(v) = 1/2 v^T Q v, so Q is the Hessian of q (for q = x^2, Q = 2;
for q = xy, Q_12 = 1).  The Clifford algebra over k[[beta]] has generators
e_i in degree -1 and relations e_i e_j + e_j e_i = -2 Q_ij beta, so
e_i^2 = -Q_ii beta.  Elements are dicts (sorted subset S, beta power k) -> coefficient,
of parity |S| mod 2 and internal degree -|S| - 2k.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactalg import MultiPoly, Ring, as_fraction, parse_poly, rank

Basis = Tuple[Tuple[int, ...], int]


class CliffordError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    Q: Tuple[Tuple[Fraction, ...], ...]
    names: Tuple[str, ...] = ()
    weights: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        Q = tuple(tuple(as_fraction(x) for x in row) for row in self.Q)
        n = len(Q)
        if any(len(r) != n for r in Q):
            raise CliffordError("Gram matrix must be square")
        if any(Q[i][j] != Q[j][i] for i in range(n) for j in range(n)):
            raise CliffordError("Gram matrix must be symmetric")
        object.__setattr__(self, "Q", Q)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(n)))
        if len(self.names) != n:
            raise CliffordError("one variable name per row of Q")

    @property
    def n(self) -> int:
        return len(self.Q)

    @property
    def nondegenerate(self) -> bool:
        return self.n == 0 or rank([list(r) for r in self.Q]) == self.n

    def bilinear(self, v: Sequence, w: Sequence) -> Fraction:
        return sum((as_fraction(v[i]) * self.Q[i][j] * as_fraction(w[j])
                    for i in range(self.n) for j in range(self.n)), Fraction(0))

    def value(self, v: Sequence) -> Fraction:
        return self.bilinear(v, v) / 2

    @property
    def ring(self) -> Ring:
        return Ring(self.names)

    def polynomial(self) -> MultiPoly:
        R = self.ring
        q = R.zero()
        for i in range(self.n):
            for j in range(self.n):
                if self.Q[i][j]:
                    q = q + R.var(self.names[i]) * R.var(self.names[j]) * (self.Q[i][j] / 2)
        return q

    def congruent(self, A: Sequence[Sequence]) -> "QuadraticForm":
        """A^T Q A."""
        n = self.n
        A = [[as_fraction(x) for x in row] for row in A]
        Q = [[sum((A[k][i] * self.Q[k][l] * A[l][j] for k in range(n) for l in range(n)), Fraction(0))
              for j in range(n)] for i in range(n)]
        return QuadraticForm(tuple(map(tuple, Q)), self.names)

    @classmethod
    def from_gram(cls, Q: Sequence[Sequence], names: Sequence[str] = ()) -> "QuadraticForm":
        return cls(tuple(tuple(as_fraction(x) for x in r) for r in Q), tuple(names))

    @classmethod
    def from_quadric(cls, q, vars: Optional[Sequence[str]] = None) -> "QuadraticForm":
        if isinstance(q, str):
            q = parse_poly(q, vars)
        if q.is_zero() or not q.is_homogeneous() or q.degree() != 2:
            raise CliffordError("a quadric must be a nonzero homogeneous polynomial of degree 2")
        n = q.ring.n
        Q = [[q.diff(i).diff(j).constant_term() for j in range(n)] for i in range(n)]
        return cls(tuple(map(tuple, Q)), q.ring.names)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "QuadraticForm":
        n = len(entries)
        return cls(tuple(tuple(as_fraction(entries[i]) if i == j else Fraction(0) for j in range(n))
                         for i in range(n)))

    @classmethod
    def hyperbolic(cls, r: int) -> "QuadraticForm":
        """sum x_i y_i on 2r variables (Q_{x_i, y_i} = 1)."""
        n = 2 * r
        Q = [[Fraction(0)] * n for _ in range(n)]
        for i in range(r):
            Q[i][r + i] = Q[r + i][i] = Fraction(1)
        names = tuple(f"x{i + 1}" for i in range(r)) + tuple(f"y{i + 1}" for i in range(r))
        return cls(tuple(map(tuple, Q)), names)


class CliffordAlgebra:
    def __init__(self, Q: QuadraticForm):
        self.form = Q
        self.n = Q.n
        self._straighten = lru_cache(maxsize=None)(self._straighten_impl)

    def basis(self, N: Optional[int] = None) -> List[Basis]:
        """Subset basis times beta^k, k < N (N=None: k = 0 only)."""
        subs = [S for p in range(self.n + 1) for S in combinations(range(self.n), p)]
        return [(S, k) for k in range(N or 1) for S in subs]

    @staticmethod
    def parity(b: Basis) -> int:
        return len(b[0]) % 2

    @staticmethod
    def degree(b: Basis) -> int:
        return -len(b[0]) - 2 * b[1]

    def dims(self, N: int) -> Tuple[int, int]:
        ev = od = 0
        for b in self.basis(N):
            if self.parity(b):
                od += 1
            else:
                ev += 1
        return ev, od

    def _straighten_impl(self, word: Tuple[int, ...]) -> Tuple[Tuple[Basis, Fraction], ...]:
        """Normal form of e_{w1} ... e_{wm} as a sum of c * e_S beta^k."""
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a < b:
                continue
            out: Dict[Basis, Fraction] = {}
            if a == b:
                c = -self.form.Q[a][a]
                if c:
                    for (S, k), v in self._straighten(word[:i] + word[i + 2:]):
                        out[(S, k + 1)] = out.get((S, k + 1), 0) + c * v
            else:
                for (S, k), v in self._straighten(word[:i] + (b, a) + word[i + 2:]):
                    out[(S, k)] = out.get((S, k), 0) - v
                c = -2 * self.form.Q[a][b]
                if c:
                    for (S, k), v in self._straighten(word[:i] + word[i + 2:]):
                        out[(S, k + 1)] = out.get((S, k + 1), 0) + c * v
            return tuple((key, v) for key, v in out.items() if v)
        return (((tuple(word), 0), Fraction(1)),)

    def mul_basis(self, x: Basis, y: Basis) -> Dict[Basis, Fraction]:
        out: Dict[Basis, Fraction] = {}
        for (S, k), v in self._straighten(x[0] + y[0]):
            key = (S, k + x[1] + y[1])
            out[key] = out.get(key, 0) + v
        return {k: v for k, v in out.items() if v}

    def mul(self, a: Dict[Basis, Fraction], b: Dict[Basis, Fraction]) -> Dict[Basis, Fraction]:
        out: Dict[Basis, Fraction] = {}
        for x, c in a.items():
            for y, d in b.items():
                for z, v in self.mul_basis(x, y).items():
                    out[z] = out.get(z, 0) + c * d * v
        return {k: v for k, v in out.items() if v}

    def gen(self, i: int) -> Dict[Basis, Fraction]:
        return {((i,), 0): Fraction(1)}

    def beta(self) -> Dict[Basis, Fraction]:
        return {((), 1): Fraction(1)}

    def truncate(self, a: Dict[Basis, Fraction], N: int) -> Dict[Basis, Fraction]:
        return {b: v for b, v in a.items() if b[1] < N}

    def is_associative(self) -> bool:
        B = self.basis()
        for x in B:
            for y in B:
                xy = self.mul_basis(x, y)
                for z in B:
                    if self.mul(xy, {z: Fraction(1)}) != self.mul({x: Fraction(1)}, self.mul_basis(y, z)):
                        return False
        return True

    def format(self, a: Dict[Basis, Fraction]) -> str:
        if not a:
            return "0"
        parts = []
        for (S, k), c in sorted(a.items(), key=lambda t: (t[0][1], len(t[0][0]), t[0][0])):
            mon = "*".join([f"e{i + 1}" for i in S] + ([f"beta^{k}" if k > 1 else "beta"] if k else []))
            parts.append(f"{c}*{mon}" if mon else f"{c}")
        return " + ".join(parts)


def clifford_mul(alg: CliffordAlgebra, a, b):
    """Product of two elements of the same algebra."""
    if isinstance(a, tuple):
        a = {a: Fraction(1)}
    if isinstance(b, tuple):
        b = {b: Fraction(1)}
    return alg.mul(a, b)
