"""Base fields: the rationals (default) and prime fields GF(p).

Polynomials always carry rational coefficients.  A prime field only enters
when a coefficient matrix is handed to the rank routines, which makes
GF(p) a cheap cross-check rather than a separate arithmetic world.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Field descriptor; ``p == 0`` means the rationals."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def element(self, c):
        """Canonical representative: Fraction in lowest terms, or int in [0, p)."""
        c = as_fraction(c)
        if not self.p:
            return c
        den = c.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator {c.denominator} vanishes mod {self.p}")
        return c.numerator * pow(den, -1, self.p) % self.p

    def __str__(self) -> str:
        return "Q" if not self.p else f"Fp:{self.p}"

    @classmethod
    def parse(cls, s: str) -> "Field":
        s = s.strip()
        if s.upper() in ("Q", "QQ", "CHAR0"):
            return cls(0)
        for prefix in ("Fp:", "FP:", "GF:", "GF", "Fp", "F"):
            if s.startswith(prefix):
                return cls(int(s[len(prefix):]))
        return cls(int(s))


QQ = Field(0)
