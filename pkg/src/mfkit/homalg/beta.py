"""Graded k[[beta]]-modules and their recovery from the slices mod beta^N.

For a complex C with beta-operator, put C_oo = C[beta] and C_N = C_oo/beta^N.
Cohomology of C_oo is a graded k[beta]-module, i.e. a barcode of bars
[g, g + 2(a - 1)] (torsion of order a generated in degree g) and half-lines
(free generators).  The short exact sequence for beta^N gives

    h_N(d) = H^d - r_N(d - 2N) + H^{d-2N+1} - r_N(d - 2N + 1),

with r_N(e) the rank of beta^N out of H^e.  So a torsion bar of order a adds
min(a, N) in its own parity (cokernel part) and min(a, N) in the opposite
parity (kernel part), while a free generator adds N in its own parity.
``decode`` inverts this from the observed h_N(d), N = 1..N_max.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple


class BetaFitError(ValueError):
    pass


@dataclass(frozen=True)
class BetaModule:
    free_rank: Tuple[int, int]
    torsion: Tuple[Tuple[int, int], ...] = ()       # (order, parity of generator)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))
        if any(a < 1 for a, _ in self.torsion):
            raise ValueError("torsion orders are >= 1")

    def dims(self, N: int) -> Tuple[int, int]:
        """Total dims over k[beta]/beta^N in (even, odd)."""
        t = sum(min(a, N) for a, _ in self.torsion)
        return (N * self.free_rank[0] + t, N * self.free_rank[1] + t)

    @property
    def tate(self) -> Tuple[int, int]:
        return self.free_rank

    def to_json(self) -> dict:
        return {"free_rank": list(self.free_rank),
                "torsion": [[a, "even" if p == 0 else "odd"] for a, p in self.torsion]}


@dataclass(frozen=True)
class Bar:
    start: int
    length: Optional[int]     # None = free


def predict(bars: List[Bar], N: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for b in bars:
        a = b.length
        top = N if a is None else min(a, N)
        for i in range(top):
            d = b.start + 2 * i
            out[d] = out.get(d, 0) + 1
        if a is not None:
            for i in range(max(0, a - N), a):
                d = b.start + 2 * i + 2 * N - 1
                out[d] = out.get(d, 0) + 1
    return out


@dataclass
class BetaFit:
    module: Optional[BetaModule]
    bars: List[Bar] = field(default_factory=list)
    determined: bool = True
    reason: str = ""


def decode(h: Dict[int, Dict[int, int]], lo: int, hi: int) -> BetaFit:
    """Recover the barcode from h[N][d] (N = 1..N_max); C lives in degrees [lo, hi]."""
    Nmax = max(h)
    if sorted(h) != list(range(1, Nmax + 1)):
        raise BetaFitError("need slices N = 1..N_max")

    def hv(N, d):
        return h[N].get(d, 0)

    d_top = lo + 2 * Nmax - 2
    H: Dict[int, int] = {}
    for d in range(lo, d_top + 1):
        Nd = (d - lo + 1) // 2 + 1
        H[d] = hv(Nd, d)
        for N in range(Nd, Nmax + 1):
            if hv(N, d) != H[d]:
                return BetaFit(None, [], False, f"slices disagree in stable range at degree {d}")

    r: Dict[int, Dict[int, int]] = {N: {} for N in range(1, Nmax + 1)}

    def rr(a, e):
        if e < lo:
            return 0
        if a == 0:
            return H.get(e)
        return r[a].get(e) if a <= Nmax else None

    for N in range(1, Nmax + 1):
        for d in range(lo, d_top + 1):
            e = d - 2 * N + 1
            prev = rr(N, d - 2 * N)
            if e < lo:
                if hv(N, d) != H[d] - prev:
                    return BetaFit(None, [], False, f"inconsistent slice N={N} at degree {d}")
                continue
            val = H[d] - prev + H[e] - hv(N, d)
            if val < 0:
                return BetaFit(None, [], False, f"negative rank at N={N}, degree {e}")
            r[N][e] = val

    bars: List[Bar] = []
    determined = True
    reason = ""
    for g in range(lo, d_top + 1):
        prev1 = rr(1, g - 2)
        if prev1 is None:
            break
        s = H[g] - prev1
        if s < 0:
            return BetaFit(None, [], False, f"negative generator count at {g}")
        counted = 0
        a = 1
        while True:
            vals = (rr(a - 1, g), rr(a, g), rr(a, g - 2), rr(a + 1, g - 2))
            if any(v is None for v in vals):
                break
            mu = vals[0] - vals[1] - vals[2] + vals[3]
            if mu < 0:
                return BetaFit(None, [], False, f"negative multiplicity at ({g},{a})")
            bars.extend(Bar(g, a) for _ in range(mu))
            counted += mu
            a += 1
        long_bars = s - counted
        if long_bars < 0:
            return BetaFit(None, [], False, f"over-counted bars at {g}")
        if long_bars:
            if g + 2 * (a - 1) >= hi + 1:
                bars.extend(Bar(g, None) for _ in range(long_bars))
            else:
                determined = False
                reason = f"undetermined at N_max={Nmax}: bars from degree {g} still alive"
    for b in bars:
        if b.length is not None and b.start + 2 * (b.length - 1) >= hi + 1:
            return BetaFit(None, bars, False, "torsion bar reaching the periodic range")
    # the fit must reproduce every sampled slice
    for N in range(1, Nmax + 1):
        pred = predict(bars, N)
        degs = set(pred) | {d for d, v in h[N].items() if v}
        for d in degs:
            if pred.get(d, 0) != hv(N, d):
                return BetaFit(None, bars, False,
                               f"undetermined at N_max={Nmax}: fit misses N={N}, degree {d}")
    if not determined:
        return BetaFit(None, bars, False, reason)
    free = [0, 0]
    tors = []
    for b in bars:
        if b.length is None:
            free[b.start % 2] += 1
        else:
            tors.append((b.length, b.start % 2))
    return BetaFit(BetaModule((free[0], free[1]), tuple(tors)), bars, True, "")


def _kernel_part(bars: List[Bar], N: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for b in bars:
        if b.length is None:
            continue
        for i in range(max(0, b.length - N), b.length):
            d = b.start + 2 * i + 2 * N - 1
            out[d] = out.get(d, 0) + 1
    return out


def _bars_from_cokernels(c: Dict[int, Dict[int, int]], Nmax: int, lo: int, hi: int):
    """Bars from the cokernel parts c[N][d] = #bars alive at d born in (d-2N, d]."""
    def cv(N, d):
        return c[N].get(d, 0) if N else 0

    top = max([d for N in c for d in c[N]] + [lo])
    bars: List[Bar] = []
    for g in range(lo, top + 1):
        births = cv(1, g)
        if births < 0:
            return None, f"negative cokernel count at degree {g}"
        prev = births
        for a in range(2, Nmax + 1):
            d = g + 2 * a - 2
            ge = cv(a, d) - cv(a - 1, d)        # born at g with length >= a
            if ge < 0 or ge > prev:
                return None, f"inconsistent bar lengths at degree {g}"
            bars.extend(Bar(g, a - 1) for _ in range(prev - ge))
            prev = ge
        if prev:
            if g + 2 * (Nmax - 1) >= hi + 1:
                bars.extend(Bar(g, None) for _ in range(prev))
            else:
                return None, f"undetermined at N_max={Nmax}: bars from degree {g} still alive"
    return bars, ""


def decode_keyed(h: Dict[int, Dict[Tuple[int, Tuple], int]], lo: int, hi: int,
                 key_shift: Tuple[int, ...]) -> Tuple[Dict[Tuple, List[Bar]], str]:
    """Barcode per internal-degree key when the slices are only known on a
    window of keys.

    A bar at key b shows its cokernel part in the slices at key b and its
    kernel part at key b + key_shift (the connecting map has the degree of
    the differential).  With key_shift of positive primary, walking the keys
    upward and subtracting the kernel parts of bars already found isolates
    the cokernel parts, which determine the bars.  Returns ({key: bars}, "")
    or ({}, reason)."""
    Nmax = max(h)
    keys = sorted({k for N in h for (_, k) in h[N]}, key=lambda k: (k[0], k))
    found: Dict[Tuple, List[Bar]] = {}
    if not key_shift or key_shift[0] == 0:
        # differential of internal degree 0: every key is an honest summand
        for k in keys:
            fit = decode({N: {d: v for (d, kk), v in h[N].items() if kk == k} for N in h}, lo, hi)
            if fit.module is None:
                return {}, f"{fit.reason} (key {k})"
            if fit.bars:
                found[k] = fit.bars
        return found, ""
    if key_shift[0] < 0:
        raise BetaFitError("key shift must raise the primary degree")
    for k in keys:
        prevk = tuple(a - b for a, b in zip(k, key_shift))
        below = found.get(prevk, [])
        c: Dict[int, Dict[int, int]] = {}
        for N in range(1, Nmax + 1):
            kern = _kernel_part(below, N)
            row = {}
            degs = {d for (d, kk) in h[N] if kk == k} | set(kern)
            for d in degs:
                v = h[N].get((d, k), 0) - kern.get(d, 0)
                if v < 0:
                    return {}, f"negative cokernel part at key {k}, N={N}, degree {d}"
                if v:
                    row[d] = v
            c[N] = row
        bars, reason = _bars_from_cokernels(c, Nmax, lo, hi)
        if bars is None:
            return {}, f"{reason} (key {k})"
        # forward check of the cokernel parts
        for N in range(1, Nmax + 1):
            pred = predict(bars, N)
            kp = _kernel_part(bars, N)
            for d in set(pred) | set(c[N]):
                if pred.get(d, 0) - kp.get(d, 0) != c[N].get(d, 0):
                    return {}, f"fit misses key {k}, N={N}, degree {d}"
        if bars:
            found[k] = bars
    return found, ""


def module_of(bars: List[Bar]) -> BetaModule:
    free = [0, 0]
    tors = []
    for b in bars:
        if b.length is None:
            free[b.start % 2] += 1
        else:
            tors.append((b.length, b.start % 2))
    return BetaModule((free[0], free[1]), tuple(tors))
