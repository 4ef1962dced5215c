"""Invariant functions on line x profinite-integers: trigonometric sums over
solenoid characters, their uniform-limit series, and leaf restrictions.

A :class:`SolenoidPoly` is a finite sum of coefficients times solenoid
characters; because every character descends to the quotient, invariance
under the diagonal integer action holds by construction, and
:func:`check_invariance` exists to measure that residual (and to expose
deliberately broken raw product-character sums, see :class:`ProductPoly`).

Restricting to a fixed transversal position t gives an ordinary function of
the real variable (:class:`LeafFunction`), a trigonometric polynomial with
the same rational frequencies and coefficients twisted by the character
values at t.  Sup norms are always estimated on uniform grids with a stated
density (default 64 points per smallest period) over a stated span.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .characters import ProductCharacter, SolenoidCharacter, _cis, eval_zhat
from .errors import DomainError
from .profinite import DEFAULT_TOWER, ProfiniteInt, approx_sequence, embed_int
from .rationals import RationalAngle

DEFAULT_GRID_DENSITY = 64
DEFAULT_GRID_SPAN = 64.0


@dataclass(frozen=True)
class SolenoidTerm:
    """One summand: a nonzero complex coefficient times a solenoid character."""

    coeff: complex
    char: SolenoidCharacter

    @property
    def freq(self) -> Fraction:
        return self.char.q


def _combine_terms(pairs: Iterable[tuple[complex, Fraction]]):
    acc: dict[Fraction, complex] = {}
    for coeff, q in pairs:
        acc[q] = acc.get(q, 0.0 + 0.0j) + complex(coeff)
    items = [(q, c) for q, c in acc.items() if c != 0]
    items.sort(key=lambda it: (it[0].denominator, it[0]))
    return items


class SolenoidPoly:
    """Finite trigonometric sum over solenoid characters.

    Terms are deduplicated, zero coefficients pruned, and kept in a canonical
    order (by denominator, then value of the rational index) so evaluation
    results do not depend on construction order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[SolenoidTerm | tuple[complex, Fraction]]):
        pairs = []
        for item in terms:
            if isinstance(item, SolenoidTerm):
                pairs.append((item.coeff, item.char.q))
            else:
                coeff, q = item
                pairs.append((complex(coeff), Fraction(q)))
        self.terms = tuple(
            SolenoidTerm(c, SolenoidCharacter(q)) for q, c in _combine_terms(pairs)
        )

    @classmethod
    def from_coeffs(cls, mapping: Mapping[Fraction | int, complex]) -> "SolenoidPoly":
        return cls((c, Fraction(q)) for q, c in mapping.items())

    @classmethod
    def zero(cls) -> "SolenoidPoly":
        return cls(())

    @property
    def frequencies(self) -> tuple[Fraction, ...]:
        return tuple(t.freq for t in self.terms)

    @property
    def coeff_map(self) -> dict[Fraction, complex]:
        return {t.freq: t.coeff for t in self.terms}

    def coeff(self, q: Fraction | int) -> complex:
        q = Fraction(q)
        for t in self.terms:
            if t.freq == q:
                return t.coeff
        return 0.0 + 0.0j

    @property
    def max_abs_freq(self) -> float:
        return max((abs(float(t.freq)) for t in self.terms), default=0.0)

    @property
    def max_denominator(self) -> int:
        return max((t.freq.denominator for t in self.terms), default=1)

    @property
    def max_angle_denominator(self) -> int:
        """Largest denominator among the transversal angles of the terms."""
        return max((t.char.angle.b for t in self.terms), default=1)

    def common_period(self) -> Fraction | None:
        """Smallest positive P with freq * P integral for every nonzero freq."""
        nonzero = [t.freq for t in self.terms if t.freq != 0]
        if not nonzero:
            return None
        big = math.lcm(*(f.denominator for f in nonzero))
        g = math.gcd(*(abs(f.numerator) * (big // f.denominator) for f in nonzero))
        return Fraction(big, g)

    def eval(self, x: float, t: ProfiniteInt | int) -> complex:
        """Pointwise value; compensated so term order cannot matter."""
        vals = [
            t_.coeff * _cis(float(t_.freq) * x) * eval_zhat(t_.char.angle, t)
            for t_ in self.terms
        ]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))

    def phased_arrays(self, t: ProfiniteInt | int) -> tuple[np.ndarray, np.ndarray]:
        """Float frequencies and coefficients twisted by the angle values at t."""
        freqs = np.array([float(t_.freq) for t_ in self.terms], dtype=np.float64)
        coeffs = np.array(
            [t_.coeff * eval_zhat(t_.char.angle, t) for t_ in self.terms],
            dtype=np.complex128,
        )
        return freqs, coeffs

    def eval_grid(self, xs: np.ndarray, t: ProfiniteInt | int) -> np.ndarray:
        freqs, coeffs = self.phased_arrays(t)
        return _kernels.eval_cisum(freqs, coeffs, np.asarray(xs, dtype=np.float64))

    def translate(self, s: float) -> "SolenoidPoly":
        """The function (x, t) -> value at (x + s, t); same characters."""
        return SolenoidPoly(
            (t.coeff * _cis(float(t.freq) * s), t.freq) for t in self.terms
        )

    def conj(self) -> "SolenoidPoly":
        return SolenoidPoly((t.coeff.conjugate(), -t.freq) for t in self.terms)

    def product(self, other: "SolenoidPoly") -> "SolenoidPoly":
        """Exact pointwise product, expanded over character sums."""
        return SolenoidPoly(
            (a.coeff * b.coeff, a.freq + b.freq)
            for a in self.terms
            for b in other.terms
        )

    def abs_square(self) -> "SolenoidPoly":
        """|value|^2 as an exact character sum (frequencies are differences)."""
        return self.product(self.conj())

    def as_product_poly(self) -> "ProductPoly":
        return ProductPoly(
            (t.coeff, t.char.as_product()) for t in self.terms
        )

    def __add__(self, other: "SolenoidPoly") -> "SolenoidPoly":
        return SolenoidPoly(
            [(t.coeff, t.freq) for t in self.terms]
            + [(t.coeff, t.freq) for t in other.terms]
        )

    def __sub__(self, other: "SolenoidPoly") -> "SolenoidPoly":
        return self + (-other)

    def __neg__(self) -> "SolenoidPoly":
        return SolenoidPoly((-t.coeff, t.freq) for t in self.terms)

    def __rmul__(self, scalar: complex) -> "SolenoidPoly":
        return SolenoidPoly((scalar * t.coeff, t.freq) for t in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        inner = " + ".join(f"({t.coeff})*chi[{t.freq}]" for t in self.terms)
        return f"SolenoidPoly({inner or '0'})"


class ProductPoly:
    """Raw finite sum over arbitrary product characters.

    Unlike :class:`SolenoidPoly` the characters need not descend, so the sum
    need not be invariant under the diagonal integer action; this is the
    vehicle for deliberately broken inputs in invariance checks.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[complex, ProductCharacter]]):
        items = [(complex(c), ch) for c, ch in terms if complex(c) != 0]
        items.sort(
            key=lambda it: (
                it[1].freq.denominator,
                it[1].freq,
                it[1].angle.b,
                it[1].angle.a,
            )
        )
        self.terms = tuple(items)

    @property
    def max_abs_freq(self) -> float:
        return max((abs(float(ch.freq)) for _, ch in self.terms), default=0.0)

    def descends(self) -> bool:
        from .characters import descends as _descends

        return all(_descends(ch) for _, ch in self.terms)

    def phased_arrays(self, t: ProfiniteInt | int):
        freqs = np.array([float(ch.freq) for _, ch in self.terms], dtype=np.float64)
        coeffs = np.array(
            [c * eval_zhat(ch.angle, t) for c, ch in self.terms], dtype=np.complex128
        )
        return freqs, coeffs

    def eval(self, x: float, t: ProfiniteInt | int) -> complex:
        vals = [
            c * _cis(float(ch.freq) * x) * eval_zhat(ch.angle, t)
            for c, ch in self.terms
        ]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))

    def eval_grid(self, xs: np.ndarray, t: ProfiniteInt | int) -> np.ndarray:
        freqs, coeffs = self.phased_arrays(t)
        return _kernels.eval_cisum(freqs, coeffs, np.asarray(xs, dtype=np.float64))


class LimitPeriodicSeries:
    """Uniformly convergent series of solenoid-character terms.

    ``term_fn(k)`` yields the k-th term (k >= 1) and ``majorant_fn(k)`` a
    summable bound with |coeff_k| <= majorant_fn(k); summability is what
    guarantees uniform convergence, so the majorant is required up front.
    Truncation to the first n terms has sup error at most the majorant tail.
    """

    def __init__(
        self,
        term_fn: Callable[[int], SolenoidTerm],
        majorant_fn: Callable[[int], float],
    ):
        self._term_fn = term_fn
        self._majorant_fn = majorant_fn
        self._terms: dict[int, SolenoidTerm] = {}

    def term(self, k: int) -> SolenoidTerm:
        if k not in self._terms:
            term = self._term_fn(k)
            bound = self._majorant_fn(k)
            if abs(term.coeff) > bound * (1 + 1e-12):
                raise DomainError(
                    f"majorant violated at term {k}: |{term.coeff}| > {bound}"
                )
            self._terms[k] = term
        return self._terms[k]

    def majorant(self, k: int) -> float:
        b = float(self._majorant_fn(k))
        if b < 0:
            raise DomainError(f"majorant must be nonnegative, got {b} at {k}")
        return b

    def truncate(self, n: int) -> SolenoidPoly:
        """The partial sum of the first n terms."""
        if n < 0:
            raise DomainError("truncation length must be nonnegative")
        return SolenoidPoly(self.term(k) for k in range(1, n + 1))

    def tail_bound(self, n: int, *, tol: float = 1e-18, max_terms: int = 10**6) -> float:
        """Upper bound for the sup error of truncate(n): sum of majorants past n."""
        total = 0.0
        k = n + 1
        while k <= n + max_terms:
            b = self.majorant(k)
            total += b
            if b < tol:
                return total
            k += 1
        raise DomainError(
            f"majorant tail did not fall below {tol} within {max_terms} terms"
        )

    def to_poly(self, *, tol: float = 1e-13, max_terms: int = 10**6):
        """Truncation whose majorant tail is at most tol, with the tail bound."""
        k = 0
        while k < max_terms:
            k += 1
            if self.tail_bound(k, max_terms=max_terms) <= tol:
                return self.truncate(k), self.tail_bound(k, max_terms=max_terms)
        raise DomainError(f"series tail did not reach {tol} within {max_terms} terms")


class LeafFunction:
    """Restriction of an invariant function to the leaf through t.

    For a finite sum this is a trigonometric polynomial of the real variable
    with the same frequencies and character-twisted coefficients; series are
    truncated to a stated tolerance and the truncation error recorded.
    """

    def __init__(
        self,
        base: SolenoidPoly | LimitPeriodicSeries,
        t: ProfiniteInt | int,
        *,
        series_tol: float = 1e-13,
    ):
        self.base = base
        self.t = t if isinstance(t, ProfiniteInt) else embed_int(t)
        if isinstance(base, LimitPeriodicSeries):
            poly, tail = base.to_poly(tol=series_tol)
            self.poly = poly
            self.truncation_error = tail
        else:
            self.poly = base
            self.truncation_error = 0.0
        self.freqs, self.coeffs = self.poly.phased_arrays(self.t)

    @property
    def max_abs_freq(self) -> float:
        return self.poly.max_abs_freq

    def common_period(self) -> Fraction | None:
        return self.poly.common_period()

    def __call__(self, xs):
        scalar = np.ndim(xs) == 0
        out = _kernels.eval_cisum(
            self.freqs, self.coeffs, np.atleast_1d(np.asarray(xs, dtype=np.float64))
        )
        return complex(out[0]) if scalar else out

    def coeff(self, q: Fraction | int) -> complex:
        """Exact coefficient of the given frequency in this leaf polynomial."""
        q = Fraction(q)
        for term in self.poly.terms:
            if term.freq == q:
                return term.coeff * eval_zhat(term.char.angle, self.t)
        return 0.0 + 0.0j


def leaf_restrict(
    fn: SolenoidPoly | LimitPeriodicSeries, t: ProfiniteInt | int
) -> LeafFunction:
    return LeafFunction(fn, t)


def uniform_grid(
    max_freq: float,
    *,
    density: int = DEFAULT_GRID_DENSITY,
    span: float = DEFAULT_GRID_SPAN,
    offset: float = 0.0,
) -> np.ndarray:
    """Uniform x-grid with >= density points per smallest period over [offset, offset+span)."""
    per_unit = density * max(max_freq, 1.0 / span)
    n = max(2, int(math.ceil(per_unit * span)))
    return offset + np.arange(n) * (span / n)


def grid_span_for(fn: SolenoidPoly | LeafFunction, span_cap: float = DEFAULT_GRID_SPAN) -> float:
    period = fn.common_period()
    if period is None:
        return 1.0
    return min(float(period), span_cap)


def check_invariance(
    fn: SolenoidPoly | ProductPoly,
    gammas: Sequence[int],
    *,
    n_samples: int = 1000,
    seed: int = 0,
    span: float | None = None,
    tower=None,
) -> float:
    """Largest sampled residual |f(x + g, t - g) - f(x, t)| over integer shifts g.

    Sums built from solenoid characters return float noise (< 1e-10 at these
    sample counts); raw product sums with a non-descending term return an
    order-one residual.
    """
    tower = tower or DEFAULT_TOWER
    rng = np.random.default_rng(seed)
    if span is None:
        span = DEFAULT_GRID_SPAN
        if isinstance(fn, SolenoidPoly):
            span = grid_span_for(fn)
    n_t = int(max(1, min(25, n_samples // 40)))
    n_x = int(math.ceil(n_samples / n_t))
    t_values = [embed_int(0, tower)] + [
        embed_int(int(rng.integers(0, tower.top)), tower) for _ in range(n_t - 1)
    ]
    worst = 0.0
    for t in t_values:
        xs = rng.uniform(0.0, span, n_x)
        base = fn.eval_grid(xs, t)
        for g in gammas:
            g = int(g)
            shifted = fn.eval_grid(xs + g, t - embed_int(g, tower))
            worst = max(worst, float(np.abs(shifted - base).max()))
    return worst


@dataclass
class TranslationNumbers:
    """Accepted shifts and the largest gap between consecutive acceptances."""

    accepted: np.ndarray
    inclusion_length: float | None
    eps: float
    window: float
    step: float

    @property
    def found(self) -> bool:
        return self.accepted.size > 0

    def summary(self) -> str:
        if not self.found:
            return f"no translation number found below {self.window}"
        return (
            f"{self.accepted.size} translation numbers in [0, {self.window}], "
            f"inclusion length {self.inclusion_length:.6g}"
        )


def translation_numbers(
    leaf: LeafFunction,
    eps: float,
    window: float,
    step: float,
    *,
    density: int = DEFAULT_GRID_DENSITY,
    span: float | None = None,
) -> TranslationNumbers:
    """Grid shifts tau in [0, window] with sup |f(.+tau) - f| <= eps.

    The sup is estimated on a uniform grid over one common period (or the
    default span); the inclusion length is the largest gap between
    consecutive accepted shifts.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    if span is None:
        span = grid_span_for(leaf)
    xs = uniform_grid(leaf.max_abs_freq, density=density, span=span)
    base = leaf(xs)
    taus = np.arange(0.0, window + 0.5 * step, step)
    accepted = []
    for tau in taus:
        gap = float(np.abs(leaf(xs + tau) - base).max())
        if gap <= eps:
            accepted.append(float(tau))
    accepted_arr = np.array(accepted)
    length = None
    if accepted_arr.size > 1:
        length = float(np.diff(accepted_arr).max())
    elif accepted_arr.size == 1:
        length = float(window)
    return TranslationNumbers(accepted_arr, length, eps, window, step)


def transversal_continuity_probe(
    fn: SolenoidPoly,
    t: ProfiniteInt,
    depths: Sequence[int],
    *,
    density: int = DEFAULT_GRID_DENSITY,
    span: float | None = None,
) -> list[float]:
    """Sup-grid gaps between the leaf at t and the leaves at its integer
    approximants; the gap drops to zero once the tower level at that depth is
    divisible by every angle denominator of the terms.
    """
    if span is None:
        span = grid_span_for(fn)
    xs = uniform_grid(fn.max_abs_freq, density=density, span=span)
    target = fn.eval_grid(xs, t)
    gaps = []
    for depth in depths:
        tk = embed_int(approx_sequence(t, depth), t.tower)
        gaps.append(float(np.abs(fn.eval_grid(xs, tk) - target).max()))
    return gaps
