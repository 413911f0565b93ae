"""Sparse multivariate polynomials with exact rational coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from .scalars import as_fraction

Monomial = Tuple[int, ...]


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Polynomial ring k[x1..xn]; weights are optional grading metadata."""

    names: Tuple[str, ...]
    weights: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"repeated variable names in {self.names}")
        if self.weights is not None:
            w = tuple(int(x) for x in self.weights)
            if len(w) != len(self.names) or any(x <= 0 for x in w):
                raise ValueError("weights must be positive, one per variable")
            object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def var(self, name) -> "MultiPoly":
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.n
        e[i] = 1
        return MultiPoly(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def const(self, c) -> "MultiPoly":
        c = as_fraction(c)
        return MultiPoly(self, {(0,) * self.n: c} if c else {})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def monomial(self, exps: Sequence[int], c=1) -> "MultiPoly":
        return MultiPoly(self, {tuple(exps): as_fraction(c)})

    def with_weights(self, weights) -> "Ring":
        return Ring(self.names, None if weights is None else tuple(weights))

    def merge(self, other: "Ring") -> "Ring":
        """Disjoint union of variable sets (names must not collide)."""
        clash = set(self.names) & set(other.names)
        if clash:
            raise RingMismatch(f"variable names collide: {sorted(clash)}")
        return Ring(self.names + other.names)

    def extend(self, extra: Sequence[str]) -> "Ring":
        return Ring(self.names + tuple(n for n in extra if n not in self.names))

    def fresh(self, base: str) -> str:
        if base not in self.names:
            return base
        i = 1
        while f"{base}{i}" in self.names:
            i += 1
        return f"{base}{i}"

    def __repr__(self) -> str:
        return f"Ring({','.join(self.names)})"


def wdeg(m: Monomial, weights: Optional[Sequence] = None) -> int:
    if weights is None:
        return sum(m)
    return sum(a * w for a, w in zip(m, weights))


def monomials_of_degree(n: int, d, weights: Optional[Sequence[int]] = None) -> Iterator[Monomial]:
    """All exponent vectors of (weighted) degree exactly d."""
    if weights is None:
        weights = (1,) * n
    if d < 0 or (n == 0 and d != 0):
        return
    if n == 0:
        yield ()
        return

    def rec(i, rest):
        w = weights[i]
        if i == n - 1:
            if rest % w == 0:
                yield (rest // w,)
            return
        for a in range(rest // w, -1, -1):
            for tail in rec(i + 1, rest - a * w):
                yield (a,) + tail

    yield from rec(0, d)


def monomials_up_to(n: int, D, weights=None) -> list:
    out = []
    for d in range(0, int(D) + 1):
        out.extend(monomials_of_degree(n, d, weights))
    return out


def _grlex_key(m: Monomial):
    return (sum(m), m)


class MultiPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Optional[Dict[Monomial, Fraction]] = None):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- basic protocol
    def _check(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            return MultiPoly(self.ring, {m: a * c for m, a in self.terms.items()})
        self._check(other)
        t: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return MultiPoly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = self.ring.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_monomial(self, mono: Monomial, c=1) -> "MultiPoly":
        c = as_fraction(c)
        return MultiPoly(self.ring, {tuple(a + b for a, b in zip(m, mono)): v * c
                                     for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.n, Fraction(0))

    def coeff(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    # -- degrees
    def degree(self, weights=None) -> int:
        if not self.terms:
            return -1
        return max(wdeg(m, weights) for m in self.terms)

    def low_degree(self, weights=None) -> int:
        if not self.terms:
            return -1
        return min(wdeg(m, weights) for m in self.terms)

    def is_homogeneous(self, weights=None) -> bool:
        return len({wdeg(m, weights) for m in self.terms}) <= 1

    def truncate(self, D, weights=None) -> "MultiPoly":
        return MultiPoly(self.ring, {m: c for m, c in self.terms.items() if wdeg(m, weights) <= D})

    # -- calculus and substitution
    def diff(self, i) -> "MultiPoly":
        if isinstance(i, str):
            i = self.ring.index(i)
        if not 0 <= i < self.ring.n:
            raise IndexError(f"variable index {i} out of range")
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                t[tuple(e)] = c * m[i]
        return MultiPoly(self.ring, t)

    def embed(self, ring: Ring) -> "MultiPoly":
        """Re-express in a ring containing all our variable names."""
        pos = [ring.index(n) for n in self.ring.names]
        t = {}
        for m, c in self.terms.items():
            e = [0] * ring.n
            for a, j in zip(m, pos):
                e[j] = a
            t[tuple(e)] = c
        return MultiPoly(ring, t)

    def subs(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute images[i] for the i-th variable (all images in one target ring)."""
        if len(images) != self.ring.n:
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        out = target.zero()
        for m, c in self.terms.items():
            t = target.const(c)
            for img, a in zip(images, m):
                if a:
                    t = t * img ** a
            out = out + t
        return out

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, a in zip(point, m):
                v *= as_fraction(x) ** a
            total += v
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _grlex_key(mc[0]), reverse=True)

    def __iter__(self):
        return iter(self.sorted_terms())

    # -- printing (output re-parses to an equal polynomial)
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            vs = []
            for name, a in zip(self.ring.names, m):
                if a == 1:
                    vs.append(name)
                elif a:
                    vs.append(f"{name}^{a}")
            mag = abs(c)
            cs = str(mag)
            if vs:
                body = "*".join(vs) if mag == 1 else cs + "*" + "*".join(vs)
            else:
                body = cs
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def partial_derivative(f: MultiPoly, var) -> MultiPoly:
    return f.diff(var)


def truncate(f: MultiPoly, D, weights=None) -> MultiPoly:
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    return f.truncate(D, weights)


def common_ring(polys: Iterable[MultiPoly]) -> Ring:
    """Smallest ring (first-appearance order) containing all given polynomials' variables."""
    names: list = []
    for p in polys:
        for nm in p.ring.names:
            if nm not in names:
                names.append(nm)
    return Ring(tuple(names))
