"""Polynomial expression parser.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | IDENT | "(" expr ")"
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(\S))")


class PolySyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


class UnknownVariable(ValueError):
    pass


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("id", m.group(2), m.start(2)))
        else:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


def _linecol(src: str, offset: int) -> Tuple[int, int]:
    line = src.count("\n", 0, offset) + 1
    col = offset - (src.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str, ring: Ring):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.ring = ring

    def err(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise PolySyntaxError(msg, *_linecol(self.src, tok[2]))

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.i -= 1
            self.err(f"expected {op!r}")

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            self.err("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.err(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            u = self.unary()
            return -u if t[1] == "-" else u
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "int":
                self.i -= 1
                self.err("exponent must be a non-negative integer")
            base = base ** int(t[1])
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            num = int(t[1])
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                d = self.take()
                if d[0] != "int":
                    self.i -= 1
                    self.err("expected integer denominator")
                if int(d[1]) == 0:
                    self.err("zero denominator", d)
                return self.ring.const(Fraction(num, int(d[1])))
            return self.ring.const(num)
        if t[0] == "id":
            return self.ring.var(t[1])
        if t[0] == "op" and t[1] == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        self.i -= 1
        self.err("unexpected end of input" if t[0] == "end" else f"unexpected {t[1]!r}")


def identifiers(src: str) -> List[str]:
    seen: List[str] = []
    for kind, val, _ in _tokenize(src):
        if kind == "id" and val not in seen:
            seen.append(val)
    return seen


def parse_poly(src: str, vars: Optional[Sequence[str]] = None, ring: Optional[Ring] = None) -> MultiPoly:
    """Parse ``src``; variables register in first-appearance order unless fixed."""
    if ring is None:
        if vars is not None:
            ring = Ring(tuple(vars))
        else:
            ring = Ring(tuple(identifiers(src)))
    for name in identifiers(src):
        if name not in ring.names:
            raise UnknownVariable(f"unknown variable {name!r} (ring is {', '.join(ring.names)})")
    return _Parser(src, ring).parse()


def parse_many(srcs: Sequence[str], vars: Optional[Sequence[str]] = None) -> List[MultiPoly]:
    """Parse several expressions into one common ring."""
    if vars is None:
        names: List[str] = []
        for s in srcs:
            for nm in identifiers(s):
                if nm not in names:
                    names.append(nm)
        vars = names
    ring = Ring(tuple(vars))
    return [parse_poly(s, ring=ring) for s in srcs]
