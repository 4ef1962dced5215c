"""Exact arithmetic on the rationals and on the circle group of rationals mod 1.

Frequencies and character indices are plain ``fractions.Fraction`` values
(arbitrary precision, always reduced).  The circle group gets its own small
value type, :class:`RationalAngle`, holding the canonical representative
a/b in [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError

Rational = Fraction


def reduce(num: int, den: int) -> Fraction:
    """Canonical reduced rational num/den with positive denominator.

    Zero is represented as 0/1.  A zero denominator is a domain error.
    """
    if den == 0:
        raise DomainError("zero denominator")
    return Fraction(num, den)


@dataclass(frozen=True)
class RationalAngle:
    """An element of the rationals mod 1, stored reduced with 0 <= a < b.

    The constructor normalizes: ``RationalAngle(7, 4)`` is 3/4 and
    ``RationalAngle(-1, 3)`` is 2/3.  The identity element is (0, 1).
    """

    a: int
    b: int

    def __post_init__(self):
        if self.b == 0:
            raise DomainError("zero denominator in angle")
        a, b = self.a, self.b
        if b < 0:
            a, b = -a, -b
        a %= b
        g = gcd(a, b)
        if g > 1:
            a //= g
            b //= g
        if a == 0:
            b = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RationalAngle":
        return cls(q.numerator, q.denominator)

    @property
    def as_fraction(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def is_zero(self) -> bool:
        return self.a == 0

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.a * other.b + other.a * self.b, self.b * other.b)

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.a, self.b)

    def __sub__(self, other: "RationalAngle") -> "RationalAngle":
        return self + (-other)

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


ZERO_ANGLE = RationalAngle(0, 1)


def frac_decompose(q: Fraction) -> tuple[int, RationalAngle]:
    """Split q = n + r with integer n and fractional part r in [0, 1).

    Uses the floor convention, so frac_decompose(-1/2) == (-1, 1/2).
    """
    n = q.numerator // q.denominator
    frac = q - n
    return n, RationalAngle(frac.numerator, frac.denominator)


def frac_angle(q: Fraction) -> RationalAngle:
    """Fractional part of q as a circle-group element."""
    return frac_decompose(q)[1]


def angle_add(p: RationalAngle, r: RationalAngle) -> RationalAngle:
    """Group law on the rationals mod 1."""
    return p + r


def angle_neg(p: RationalAngle) -> RationalAngle:
    """Group inverse on the rationals mod 1."""
    return -p
