"""Cyclic-bar insertion operator and its HKR image.

B(a1 (x) ... (x) am) = sum_{i=1..m} (-1)^i a1 (x) .. (x) ai (x) f (x) a(i+1) (x) .. (x) am

and HKR(a1 (x) .. (x) am) = a1 da2 ^ .. ^ dam / (m-1)!.  With this scaling
HKR(B w) = -df ^ HKR(w) holds on the nose: each of the m insertions moves df
to the front with sign (-1)^(i-1), giving -m/m! = -1/(m-1)!.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Dict, List, Sequence, Tuple

from ..exactalg import MultiPoly, monomials_up_to
from . import forms as F


class BarWordError(ValueError):
    pass


@dataclass(frozen=True)
class BarWord:
    factors: Tuple[MultiPoly, ...]

    def __post_init__(self):
        if len(self.factors) < 1:
            raise BarWordError("a bar word has at least one factor")
        rings = {a.ring for a in self.factors}
        if len(rings) != 1:
            raise BarWordError("all factors must lie in the same ring")

    @property
    def length(self) -> int:
        return len(self.factors)

    @property
    def ring(self):
        return self.factors[0].ring

    def __str__(self):
        return " (x) ".join(f"({a})" for a in self.factors)


Chain = Dict[BarWord, Fraction]        # formal linear combination of words


def cyclic_bar_B(w: BarWord, f: MultiPoly) -> List[Tuple[int, BarWord]]:
    """Signed insertions of f after each position, last position included."""
    a = w.factors
    return [((-1) ** i, BarWord(a[:i] + (f,) + a[i:])) for i in range(1, len(a) + 1)]


def apply_B(chain: Chain, f: MultiPoly) -> Chain:
    out: Chain = {}
    for w, c in chain.items():
        for s, w2 in cyclic_bar_B(w, f):
            out[w2] = out.get(w2, 0) + s * c
    return {w: c for w, c in out.items() if c}


def expand(chain: Chain) -> Dict[Tuple[Tuple[int, ...], ...], Fraction]:
    """Multilinear expansion into monomial words, for cancellation checks."""
    out: Dict = {}
    for w, c in chain.items():
        for combo in product(*[list(a.terms.items()) for a in w.factors]):
            key = tuple(m for m, _ in combo)
            v = c
            for _, k in combo:
                v *= k
            out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def hkr_map(w: BarWord) -> F.Form:
    a = w.factors
    form = F.function_form(a[0])
    for g in a[1:]:
        form = F.wedge(form, F.exact(g))
    return F.scale(form, Fraction(1, factorial(len(a) - 1)))


def hkr_chain(chain: Chain) -> F.Form:
    out: F.Form = {}
    for w, c in chain.items():
        out = F.add(out, F.scale(hkr_map(w), c))
    return out


def hkr_intertwines(w: BarWord, f: MultiPoly, sign: int = -1) -> bool:
    """HKR(B w) == sign * df ^ HKR(w)."""
    lhs = hkr_chain(apply_B({w: Fraction(1)}, f))
    rhs = F.scale(F.df_wedge(f, hkr_map(w)), sign)
    return F.forms_equal(lhs, rhs)


def hkr_intertwine_check(f: MultiPoly, m_max: int = 3, deg_max: int = 3, sign: int = -1) -> bool:
    """Exhaustive: every word of monomials of degree <= deg_max, length <= m_max."""
    R = f.ring
    monos = [R.monomial(m) for m in monomials_up_to(R.n, deg_max)]
    for m in range(1, m_max + 1):
        for word in product(monos, repeat=m):
            if not hkr_intertwines(BarWord(tuple(word)), f, sign):
                return False
    return True
