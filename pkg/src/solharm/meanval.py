"""Mean-value operators.

Three schemes:

* ``exact`` -- symbolic: the mean of a finite character sum is the
  coefficient of the zero-frequency term, and every nonzero frequency
  averages to zero.  Error bound exactly 0.
* ``window`` -- (1/T) integral over [0, T] by composite Gauss-Legendre
  panels sized so each panel spans at most one period of the fastest
  component, with 32 nodes per panel.  A pure nonzero frequency mu leaks at
  most 1/(pi*|mu|*T).
* ``cesaro`` -- the iterated window mean, a single weighted integral over
  [0, 2T] with the triangular weight min(u, 2T - u)/T^2.  Pure-frequency
  leakage is the square of the window leak, which is what makes it the
  scheme of choice for numeric coefficient extraction.

The mean over the full product space equals the leaf mean for any fixed
transversal position (combined with the normalized Haar average over the
transversal, which is exact for these cylinder integrands), so the numeric
schemes operate on leaf restrictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _kernels
from .errors import DomainError
from .funcspace import LeafFunction, LimitPeriodicSeries, ProductPoly, SolenoidPoly
from .profinite import ProfiniteInt, embed_int

QUAD_NODES_PER_PERIOD = 32

SCHEME_EXACT = "exact"
SCHEME_WINDOW = "window"
SCHEME_CESARO = "cesaro"


@dataclass
class MeanEstimate:
    """A mean value with its scheme, horizon, and a-priori error bound."""

    value: complex
    scheme: str
    horizon: float | None = None
    error_bound: float | None = None


def window_leak(min_freq: float, T: float) -> float:
    """Sup of |(1/T) integral_0^T e(mu x) dx| over |mu| >= min_freq."""
    return 1.0 / (math.pi * min_freq * T)


def scheme_leak(scheme: str, min_freq: float, T: float) -> float:
    leak = window_leak(min_freq, T)
    return leak * leak if scheme == SCHEME_CESARO else leak


def _panelization(T: float, max_freq: float, nodes_per_period: int):
    """Panel width and count so panels tile [0, T] with one period max each."""
    n_half = max(1, math.ceil(T * max_freq - 1e-9))
    h = T / n_half
    xi, glw = _kernels.panel_rule(nodes_per_period, h)
    return h, n_half, xi, glw


def _eval_callable(f: Callable, xs: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(xs), dtype=np.complex128)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([f(float(x)) for x in xs], dtype=np.complex128)


def mean_window(
    f: Callable,
    T: float,
    *,
    max_freq: float = 1.0,
    min_freq: float | None = None,
    nodes_per_period: int = QUAD_NODES_PER_PERIOD,
    scheme: str = SCHEME_WINDOW,
) -> MeanEstimate:
    """Windowed mean of a callable by composite Gauss-Legendre quadrature.

    ``max_freq`` (cycles per unit) sets the panel density; ``min_freq``, when
    known, yields the a-priori bound on how far the estimate of a zero-mean
    oscillation can sit from zero.  Non-finite samples raise.
    """
    if T <= 0:
        raise DomainError("horizon T must be positive")
    if scheme not in (SCHEME_WINDOW, SCHEME_CESARO):
        raise DomainError(f"unknown windowed scheme {scheme!r}")
    tri = scheme == SCHEME_CESARO
    h, n_half, xi, glw = _panelization(T, max_freq, nodes_per_period)
    n_panels = 2 * n_half if tri else n_half
    nodes = _kernels.panel_nodes(h, xi, n_panels)
    samples = _eval_callable(f, nodes)
    if not np.all(np.isfinite(samples)):
        raise FloatingPointError("non-finite sample in windowed mean")
    tri_span = 2.0 * T if tri else -1.0
    total = _kernels.weighted_sum(samples, xi, glw, h, n_panels, tri_span)
    value = total / (T * T) if tri else total / T
    bound = None
    if min_freq is not None and min_freq > 0:
        amp = float(np.abs(samples).max()) if samples.size else 0.0
        bound = amp * scheme_leak(scheme, min_freq, T)
    return MeanEstimate(complex(value), scheme, float(T), bound)


def mean_cesaro(f: Callable, T: float, **kwargs) -> MeanEstimate:
    """Iterated (double) window mean; see :func:`mean_window`."""
    kwargs["scheme"] = SCHEME_CESARO
    return mean_window(f, T, **kwargs)


def _leaf_arrays(
    fn: SolenoidPoly | ProductPoly | LeafFunction, t: ProfiniteInt | int
):
    if isinstance(fn, LeafFunction):
        return fn.freqs, fn.coeffs
    return fn.phased_arrays(t)


def poly_mean_numeric(
    fn: SolenoidPoly | ProductPoly | LeafFunction,
    T: float,
    *,
    t: ProfiniteInt | int = 0,
    scheme: str = SCHEME_WINDOW,
    freq_shift: Fraction | float = 0,
    power: bool = False,
    nodes_per_period: int = QUAD_NODES_PER_PERIOD,
) -> MeanEstimate:
    """Quadrature mean of a leaf restriction, fused sampling and reduction.

    With ``freq_shift`` = q the integrand is the leaf times e(-q x) (the
    numeric coefficient extractor); with ``power`` the integrand is the
    squared magnitude of the leaf.  The reported error bound is the exact
    a-priori leakage sum over the nonzero frequencies of the integrand.
    """
    if T <= 0:
        raise DomainError("horizon T must be positive")
    tri = scheme == SCHEME_CESARO
    if scheme not in (SCHEME_WINDOW, SCHEME_CESARO):
        raise DomainError(f"unknown windowed scheme {scheme!r}")
    freqs, coeffs = _leaf_arrays(fn, t)
    if power:
        eff_freqs = np.subtract.outer(freqs, freqs).ravel()
        eff_amps = np.abs(np.multiply.outer(coeffs, coeffs.conj())).ravel()
    else:
        eff_freqs = freqs - float(freq_shift)
        eff_amps = np.abs(coeffs)
    max_freq = float(np.abs(eff_freqs).max()) if eff_freqs.size else 0.0
    h, n_half, xi, glw = _panelization(T, max_freq, nodes_per_period)
    n_panels = 2 * n_half if tri else n_half
    tri_span = 2.0 * T if tri else -1.0
    kfreqs = freqs - (0.0 if power else float(freq_shift))
    total = _kernels.poly_weighted_sum(
        kfreqs.astype(np.float64),
        coeffs.astype(np.complex128),
        h,
        xi,
        glw,
        n_panels,
        tri_span,
        power,
    )
    value = total / (T * T) if tri else total / T
    if power:
        value = complex(value.real, 0.0)
    nz = np.abs(eff_freqs) > 1e-15
    bound = float(
        np.sum(eff_amps[nz] * scheme_leak(scheme, np.abs(eff_freqs[nz]), T))
    ) if nz.any() else 0.0
    return MeanEstimate(complex(value), scheme, float(T), bound)


def mean_exact(
    fn: SolenoidPoly | ProductPoly | LeafFunction,
    t: ProfiniteInt | int = 0,
) -> MeanEstimate:
    """Symbolic mean of a trigonometric sum: its zero-frequency coefficient."""
    if isinstance(fn, LeafFunction):
        value = fn.coeff(0)
    elif isinstance(fn, SolenoidPoly):
        value = fn.coeff(0)
    elif isinstance(fn, ProductPoly):
        from .characters import eval_zhat

        parts = [
            c * eval_zhat(ch.angle, t) for c, ch in fn.terms if ch.freq == 0
        ]
        value = complex(
            math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts)
        )
    else:
        raise DomainError(f"mean_exact expects a symbolic sum, got {type(fn)!r}")
    return MeanEstimate(complex(value), SCHEME_EXACT, None, 0.0)


def solenoid_mean(fn: SolenoidPoly | LimitPeriodicSeries) -> MeanEstimate:
    """Mean over the full space: the coefficient of the trivial character.

    Equals the leaf mean at every transversal position combined with the
    exact Haar average; for a series the constant term is read from a
    truncation whose majorant tail is negligible at double precision.
    """
    if isinstance(fn, LimitPeriodicSeries):
        poly, tail = fn.to_poly(tol=1e-15)
        est = MeanEstimate(poly.coeff(0), SCHEME_EXACT, None, float(tail))
        return est
    if isinstance(fn, SolenoidPoly):
        return MeanEstimate(fn.coeff(0), SCHEME_EXACT, None, 0.0)
    raise DomainError(f"solenoid_mean expects a symbolic function, got {type(fn)!r}")


def mean_comparison_check(
    fn: SolenoidPoly, t_samples: list[ProfiniteInt | int]
) -> float:
    """Largest deviation of a leaf mean from the full-space mean.

    Exact on both sides: the only term surviving the leaf mean is the
    constant one, whose character value is 1 at every t.
    """
    reference = solenoid_mean(fn).value
    worst = 0.0
    for t in t_samples:
        leaf = LeafFunction(fn, t if isinstance(t, ProfiniteInt) else embed_int(t))
        worst = max(worst, abs(mean_exact(leaf).value - reference))
    return worst


def mean_linearity_translation_check(
    fn: SolenoidPoly,
    other: SolenoidPoly,
    s: float,
    *,
    scheme: str = SCHEME_EXACT,
    T: float | None = None,
) -> tuple[float, float]:
    """Residuals of additivity and translation invariance of the mean.

    Exact path: both residuals are identically zero (the constant-term
    coefficient is additive, and translation multiplies only nonconstant
    terms by unit phases).  Numeric path: windowed means at horizon T.
    """
    if scheme == SCHEME_EXACT:
        add_res = abs(
            solenoid_mean(fn + other).value
            - (solenoid_mean(fn).value + solenoid_mean(other).value)
        )
        trans_res = abs(
            solenoid_mean(fn.translate(s)).value - solenoid_mean(fn).value
        )
        return add_res, trans_res
    if T is None:
        raise DomainError("numeric check needs a horizon T")
    m_fn = poly_mean_numeric(fn, T, scheme=scheme)
    m_other = poly_mean_numeric(other, T, scheme=scheme)
    m_sum = poly_mean_numeric(fn + other, T, scheme=scheme)
    m_trans = poly_mean_numeric(fn.translate(s), T, scheme=scheme)
    return (
        abs(m_sum.value - m_fn.value - m_other.value),
        abs(m_trans.value - m_fn.value),
    )
