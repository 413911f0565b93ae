"""Polynomial differential forms and polyvector fields.

A form is a dict mapping a sorted index tuple I to its coefficient, so
{(0, 1): g} is g dx0^dx1.  Polyvectors use the same shape with I read as
d/dx_I.  Zero coefficients are never stored.
"""
from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ..exactalg import MultiPoly, Ring

Index = Tuple[int, ...]
Form = Dict[Index, MultiPoly]


def subsets(n: int, p: int) -> List[Index]:
    return list(combinations(range(n), p))


def insert_index(i: int, I: Index) -> Optional[Tuple[int, Index]]:
    """dx_i ^ dx_I = sign * dx_J, or None if i is already in I."""
    if i in I:
        return None
    below = sum(1 for j in I if j < i)
    return (-1 if below % 2 else 1), tuple(sorted(I + (i,)))


def _add(out: Form, I: Index, g: MultiPoly) -> None:
    if not g:
        return
    h = out[I] + g if I in out else g
    if h:
        out[I] = h
    else:
        out.pop(I, None)


def scale(form: Form, c) -> Form:
    return {I: g * c for I, g in form.items() if c}


def add(a: Form, b: Form) -> Form:
    out = dict(a)
    for I, g in b.items():
        _add(out, I, g)
    return out


def wedge(a: Form, b: Form) -> Form:
    out: Form = {}
    for I, g in a.items():
        for J, h in b.items():
            if set(I) & set(J):
                continue
            # sign of the shuffle sorting I + J
            inv = sum(1 for i in I for j in J if i > j)
            _add(out, tuple(sorted(I + J)), g * h * (-1 if inv % 2 else 1))
    return out


def exact(g: MultiPoly) -> Form:
    """dg as a one-form."""
    out: Form = {}
    for i in range(g.ring.n):
        _add(out, (i,), g.diff(i))
    return out


def de_rham(form: Form) -> Form:
    out: Form = {}
    for I, g in form.items():
        for i in range(g.ring.n):
            ins = insert_index(i, I)
            if ins is not None:
                s, J = ins
                _add(out, J, g.diff(i) * s)
    return out


def df_wedge(f: MultiPoly, form: Form) -> Form:
    out: Form = {}
    for I, g in form.items():
        for i in range(f.ring.n):
            ins = insert_index(i, I)
            if ins is not None:
                s, J = ins
                _add(out, J, f.diff(i) * g * s)
    return out


def contract_df(f: MultiPoly, pv: Form) -> Form:
    """i_df on polyvectors: d/dx_I -> sum_k (-1)^k (df/dx_{i_k}) d/dx_{I minus i_k}."""
    out: Form = {}
    for I, g in pv.items():
        for k, i in enumerate(I):
            _add(out, I[:k] + I[k + 1:], f.diff(i) * g * (-1 if k % 2 else 1))
    return out


def zero_form() -> Form:
    return {}


def function_form(g: MultiPoly) -> Form:
    return {(): g} if g else {}


def forms_equal(a: Form, b: Form) -> bool:
    return not add(a, scale(b, -1))


def form_ring(form: Form) -> Optional[Ring]:
    for g in form.values():
        return g.ring
    return None
