"""Mixed complexes (C, delta, B): delta of degree +1, B of degree -1,
delta^2 = B^2 = delta B + B delta = 0.

From one mixed complex we read off
  * plain cohomology of (C, delta)                (the k-linear Ext),
  * the slices C (x) k[beta]/beta^N with delta + beta B, beta in degree +2,
  * the Z/2 fold with delta + B                   (beta inverted, Tate).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..exactalg import QQ, Field, MultiPoly
from .complexes import FreeModule, HomologyDims, PolyMap, direct_sum, homology
from .grading import Grading

Entries = Dict[Tuple[int, int], MultiPoly]


@dataclass
class MixedComplex:
    n: int
    terms: Dict[int, FreeModule]
    delta: Dict[int, Entries]          # C^j -> C^{j+1}
    bop: Dict[int, Entries]            # C^j -> C^{j-1}
    grading: Optional[Grading]
    hdeg: Tuple[Fraction, ...] = ()    # internal degree of delta and of B
    max_exp: Optional[int] = None
    slack: Optional[int] = None

    @property
    def lo(self) -> int:
        return min((j for j, m in self.terms.items() if m.rank), default=0)

    @property
    def hi(self) -> int:
        return max((j for j, m in self.terms.items() if m.rank), default=0)

    def _empty(self) -> FreeModule:
        return FreeModule(self.n, [], [], self.max_exp)

    def term(self, j) -> FreeModule:
        return self.terms.get(j) or self._empty()

    def _assemble(self, src_parts, tgt_parts, pieces) -> PolyMap:
        """pieces: list of (src key, tgt key, entries, sign)."""
        src, soffs = direct_sum([m for _, m in src_parts]) if src_parts else (self._empty(), [])
        tgt, toffs = direct_sum([m for _, m in tgt_parts]) if tgt_parts else (self._empty(), [])
        src.max_exp = tgt.max_exp = self.max_exp
        so = {k: o for (k, _), o in zip(src_parts, soffs)}
        to = {k: o for (k, _), o in zip(tgt_parts, toffs)}
        ents: Entries = {}
        for sk, tk, e, sign in pieces:
            if sk not in so or tk not in to:
                continue
            for (i, j), poly in e.items():
                key = (to[tk] + i, so[sk] + j)
                val = poly if sign == 1 else -poly
                ents[key] = ents[key] + val if key in ents else val
        return PolyMap(src, tgt, ents, self.hdeg)

    def _h(self, mid_parts, out_parts, in_parts, out_pieces, in_pieces, D, field) -> HomologyDims:
        out = self._assemble(mid_parts, out_parts, out_pieces)
        inc = self._assemble(in_parts, mid_parts, in_pieces)
        return homology(out.source, out, inc, self.grading, D, field, slack=self.slack)

    # --- plain cohomology of (C, delta)
    def plain(self, D: int, field: Field = QQ) -> Dict[int, HomologyDims]:
        res = {}
        for j in range(self.lo, self.hi + 1):
            mid = [(j, self.term(j))]
            res[j] = self._h(mid, [(j + 1, self.term(j + 1))], [(j - 1, self.term(j - 1))],
                             [(j, j + 1, self.delta.get(j, {}), 1)],
                             [(j - 1, j, self.delta.get(j - 1, {}), 1)], D, field)
        return res

    # --- beta slices
    def slice_parts(self, j: int, N: int):
        return [((k, j - 2 * k), self.term(j - 2 * k)) for k in range(N)
                if self.lo <= j - 2 * k <= self.hi]

    def _slice_pieces(self, j: int, N: int):
        pieces = []
        for k in range(N):
            c = j - 2 * k
            pieces.append(((k, c), (k, c + 1), self.delta.get(c, {}), 1))
            if k + 1 < N:
                pieces.append(((k, c), (k + 1, c - 1), self.bop.get(c, {}), 1))
        return pieces

    def slice(self, N: int, D: int, field: Field = QQ) -> Dict[int, HomologyDims]:
        res = {}
        for j in range(self.lo, self.hi + 2 * (N - 1) + 1):
            mid = self.slice_parts(j, N)
            if not mid:
                continue
            res[j] = self._h(mid, self.slice_parts(j + 1, N), self.slice_parts(j - 1, N),
                             self._slice_pieces(j, N), self._slice_pieces(j - 1, N), D, field)
        return res

    # --- Tate fold
    def _fold_parts(self, parity):
        return [(j, m) for j, m in sorted(self.terms.items()) if j % 2 == parity and m.rank]

    def _fold_pieces(self, parity):
        pieces = []
        for j, _ in self._fold_parts(parity):
            pieces.append((j, j + 1, self.delta.get(j, {}), 1))
            pieces.append((j, j - 1, self.bop.get(j, {}), 1))
        return pieces

    def tate(self, D: int, field: Field = QQ) -> Tuple[HomologyDims, HomologyDims]:
        out = []
        for par in (0, 1):
            out.append(self._h(self._fold_parts(par), self._fold_parts(1 - par), self._fold_parts(1 - par),
                               self._fold_pieces(par), self._fold_pieces(1 - par), D, field))
        return out[0], out[1]
