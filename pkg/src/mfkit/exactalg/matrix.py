"""Dense matrices of polynomials, and finite truncated vector spaces."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Hashable, List, Sequence, Tuple

from .poly import MultiPoly, Ring, RingMismatch


class PolyMatrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: Ring, entries: Sequence[Sequence[MultiPoly]], rows=None, cols=None):
        self.ring = ring
        self.entries = tuple(tuple(e) for e in entries)
        self.rows = len(self.entries) if rows is None else rows
        self.cols = (len(self.entries[0]) if self.entries else 0) if cols is None else cols
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")
        for r in self.entries:
            for e in r:
                if e.ring != ring:
                    raise RingMismatch(f"entry in {e.ring}, matrix over {ring}")

    @classmethod
    def zero(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def scalar(cls, ring, n, c):
        c = c if isinstance(c, MultiPoly) else ring.const(c)
        z = ring.zero()
        return cls(ring, [[c if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def identity(cls, ring, n):
        return cls.scalar(ring, n, 1)

    @classmethod
    def from_func(cls, ring, rows, cols, fn: Callable[[int, int], MultiPoly]):
        return cls(ring, [[fn(i, j) for j in range(cols)] for i in range(rows)], rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __add__(self, other: "PolyMatrix"):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r1, r2)]
                                      for r1, r2 in zip(self.entries, other.entries)], *self.shape)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError(f"inner dimensions differ: {self.shape} x {other.shape}")
            z = self.ring.zero()
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = z
                    for k in range(self.cols):
                        a = self.entries[i][k]
                        if a:
                            b = other.entries[k][j]
                            if b:
                                acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return PolyMatrix(self.ring, out, self.rows, other.cols)
        return self.map(lambda e: e * other)

    __rmul__ = lambda self, c: self.map(lambda e: e * c)

    def map(self, fn):
        ents = [[fn(e) for e in r] for r in self.entries]
        ring = ents[0][0].ring if ents and ents[0] else self.ring
        return PolyMatrix(ring, ents, self.rows, self.cols)

    def transpose(self):
        return PolyMatrix(self.ring, [[self.entries[i][j] for i in range(self.rows)]
                                      for j in range(self.cols)], self.cols, self.rows)

    T = property(transpose)

    def embed(self, ring: Ring):
        return PolyMatrix(ring, [[e.embed(ring) for e in r] for r in self.entries], self.rows, self.cols)

    def first_mismatch(self, other: "PolyMatrix"):
        for i in range(self.rows):
            for j in range(self.cols):
                if self.entries[i][j] != other.entries[i][j]:
                    return (i, j)
        return None

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def nonzero(self):
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                if e:
                    yield i, j, e

    def to_strings(self) -> List[List[str]]:
        return [[str(e) for e in r] for r in self.entries]

    def __repr__(self):
        return "PolyMatrix(" + repr(self.to_strings()) + ")"


def block(ring: Ring, blocks: Sequence[Sequence[PolyMatrix]]) -> PolyMatrix:
    rows = []
    for brow in blocks:
        h = brow[0].rows
        for i in range(h):
            r = []
            for b in brow:
                r.extend(b.entries[i])
            rows.append(r)
    return PolyMatrix(ring, rows)


@dataclass(frozen=True)
class TruncatedVectorSpace:
    """Finite basis of labels (e.g. (slot, monomial) pairs) below a degree bound."""

    basis: Tuple[Hashable, ...]

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis labels must be unique")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self) -> Dict[Hashable, int]:
        return {b: i for i, b in enumerate(self.basis)}

    def matrix_of(self, target: "TruncatedVectorSpace", image: Callable[[Hashable], Dict[Hashable, object]]):
        """Dense scalar matrix (rows = target basis) of the linear map given on basis labels.

        Images landing outside the target basis raise KeyError."""
        idx = target.index()
        m = [[0] * self.dim for _ in range(target.dim)]
        for j, b in enumerate(self.basis):
            for lab, c in image(b).items():
                m[idx[lab]][j] += c
        return m
