"""Characters of the line, the profinite integers, and their product.

Normalization: the frequency-q character of the line is x -> exp(2*pi*i*q*x)
with q rational, and the angle-a/b character of the profinite group is
t -> exp(2*pi*i*a*(t mod b)/b).  With this convention a product character
(freq, angle) kills the diagonal subgroup generated by (-1, 1) -- and hence
descends to the solenoid quotient -- exactly when angle equals the
fractional part of freq, a test that is pure rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .profinite import ProfiniteInt, residue
from .rationals import RationalAngle, frac_angle, frac_decompose


def _cis(turns: float) -> complex:
    """exp(2*pi*i*turns), exactly range-reducing turns mod 1 first."""
    phase = 2.0 * math.pi * (turns - math.floor(turns))
    return complex(math.cos(phase), math.sin(phase))


def eval_zhat(angle: RationalAngle, t: ProfiniteInt | int) -> complex:
    """Value of the angle character at t; depends only on t mod b."""
    if angle.is_zero:
        return 1.0 + 0.0j
    r = residue(t, angle.b)
    # reduce the phase index mod b before touching floats
    return _cis(((angle.a * r) % angle.b) / angle.b)


@dataclass(frozen=True)
class ZhatCharacter:
    """Character of the profinite integers indexed by a rational angle."""

    angle: RationalAngle

    def __call__(self, t: ProfiniteInt | int) -> complex:
        return eval_zhat(self.angle, t)

    @property
    def modulus(self) -> int:
        return self.angle.b


@dataclass(frozen=True)
class ProductCharacter:
    """Character of line x profinite-integers: (x, t) -> e(freq*x) * e(angle*t)."""

    freq: Fraction
    angle: RationalAngle

    def __call__(self, x: float, t: ProfiniteInt | int) -> complex:
        return eval_product(self, x, t)

    def conjugate(self) -> "ProductCharacter":
        return ProductCharacter(-self.freq, -self.angle)

    def __mul__(self, other: "ProductCharacter") -> "ProductCharacter":
        return ProductCharacter(self.freq + other.freq, self.angle + other.angle)


def eval_product(c: ProductCharacter, x: float, t: ProfiniteInt | int) -> complex:
    return _cis(float(c.freq) * x) * eval_zhat(c.angle, t)


def descends(c: ProductCharacter) -> bool:
    """Whether c factors through the solenoid quotient.

    True exactly when the angle equals the fractional part of the frequency,
    i.e. when c annihilates the diagonal generator (-1, 1).
    """
    return frac_decompose(c.freq)[1] == c.angle


@dataclass(frozen=True)
class SolenoidCharacter:
    """Character of the solenoid, indexed by a single rational q.

    As a product character it has frequency q and angle frac(q), which is
    the general form of a character annihilating the diagonal integers.
    """

    q: Fraction

    def as_product(self) -> ProductCharacter:
        return ProductCharacter(self.q, frac_angle(self.q))

    def __call__(self, x: float, t: ProfiniteInt | int) -> complex:
        return eval_product(self.as_product(), x, t)

    @property
    def angle(self) -> RationalAngle:
        return frac_angle(self.q)

    def conjugate(self) -> "SolenoidCharacter":
        return SolenoidCharacter(-self.q)

    def __mul__(self, other: "SolenoidCharacter") -> "SolenoidCharacter":
        return SolenoidCharacter(self.q + other.q)

    def __str__(self) -> str:
        return f"chi[{self.q}]"


def solenoid_character(q: Fraction | int) -> SolenoidCharacter:
    return SolenoidCharacter(Fraction(q))


def from_product(c: ProductCharacter) -> SolenoidCharacter:
    """Reindex a descending product character by its rational frequency."""
    if not descends(c):
        raise DomainError(
            f"character (freq={c.freq}, angle={c.angle}) does not descend: "
            f"angle must equal frac(freq) = {frac_angle(c.freq)}"
        )
    return SolenoidCharacter(c.freq)


def haar_pairing(rho: RationalAngle, sigma: RationalAngle) -> int:
    """Exact Haar integral of chi_rho * conj(chi_sigma) over the profinite group.

    The integrand is the character of the angle rho - sigma, a cylinder
    function mod its denominator b.  For b > 1 the residues a*r mod b sweep
    every class exactly once (a is a unit mod b), so the cylinder average is
    the full sum of b-th roots of unity, which is zero; for b == 1 it is one.
    Pure integer arithmetic, no floats.
    """
    delta = rho - sigma
    return 1 if delta.is_zero else 0
