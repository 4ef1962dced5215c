"""Pure-numpy kernel backend.

Vectorized over panel blocks; block partial sums use numpy's pairwise
summation and are combined with Kahan compensation, which keeps the final
reductions within ~1e-13 of the jitted backend.
"""

from __future__ import annotations

import numpy as np

_PANEL_BLOCK = 1 << 14  # panels per vectorized block
_TWO_PI = 2.0 * np.pi


def _cis(turns: np.ndarray) -> np.ndarray:
    """exp(2*pi*i*turns), with turns reduced mod 1 before scaling.

    The reduction is exact in floating point and keeps large arguments on
    the same footing as the jitted backend's range-reduced recurrences.
    """
    t = turns - np.floor(turns)
    return np.exp((_TWO_PI * 1j) * t)


def eval_cisum(freqs: np.ndarray, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """sum_j coeffs[j] * exp(2*pi*i*freqs[j]*x) for each x."""
    xs = np.asarray(xs, dtype=np.float64)
    out = np.zeros(xs.shape, dtype=np.complex128)
    for f, c in zip(freqs, coeffs):
        out += c * _cis(f * xs)
    return out


def _kahan_combine(partials):
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for term in partials:
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
    return s


def _block_weights(glw, h, xi, p0, p1, tri_span):
    w = np.broadcast_to(glw, (p1 - p0, glw.size))
    if tri_span > 0.0:
        u = (np.arange(p0, p1, dtype=np.float64) * h)[:, None] + xi[None, :]
        w = w * np.minimum(u, tri_span - u)
    return w


def weighted_sum(samples, xi, glw, h, n_panels, tri_span):
    """sum over nodes of weight * sample, complex samples."""
    K = glw.size
    partials = []
    for p0 in range(0, n_panels, _PANEL_BLOCK):
        p1 = min(p0 + _PANEL_BLOCK, n_panels)
        s = samples[p0 * K : p1 * K].reshape(-1, K)
        w = _block_weights(glw, h, xi, p0, p1, tri_span)
        partials.append(complex(np.sum(w * s)))
    return _kahan_combine(partials)


def weighted_sum_abs2(samples, xi, glw, h, n_panels, tri_span):
    """sum over nodes of weight * |sample|^2."""
    K = glw.size
    partials = []
    for p0 in range(0, n_panels, _PANEL_BLOCK):
        p1 = min(p0 + _PANEL_BLOCK, n_panels)
        s = samples[p0 * K : p1 * K].reshape(-1, K)
        w = _block_weights(glw, h, xi, p0, p1, tri_span)
        partials.append(float(np.sum(w * (s.real * s.real + s.imag * s.imag))))
    return float(_kahan_combine(partials).real)


def _block_values(freqs, coeffs, h, xi, p0, p1):
    ps = np.arange(p0, p1, dtype=np.float64)
    zeta = _cis(np.outer(freqs, xi))  # [J, K]
    pphase = _cis(np.outer(freqs * h, ps))  # [J, P]
    return (coeffs[:, None] * pphase).T @ zeta  # [P, K]


def poly_weighted_sum(freqs, coeffs, h, xi, glw, n_panels, tri_span, abs2):
    """Fused: sample the exponential sum on panel nodes and weight-reduce."""
    partials = []
    for p0 in range(0, n_panels, _PANEL_BLOCK):
        p1 = min(p0 + _PANEL_BLOCK, n_panels)
        vals = _block_values(freqs, coeffs, h, xi, p0, p1)
        w = _block_weights(glw, h, xi, p0, p1, tri_span)
        if abs2:
            partials.append(
                float(np.sum(w * (vals.real * vals.real + vals.imag * vals.imag)))
                + 0.0j
            )
        else:
            partials.append(complex(np.sum(w * vals)))
    return _kahan_combine(partials)


def fold_poly(freqs, coeffs, h, xi, glw, n_panels, tri_span, nfft):
    """Weighted samples of the exponential sum, folded panel-index mod nfft.

    Returns (rows[K, nfft], amp) where rows[k, p % nfft] accumulates
    weight(p, k) * value(p, k) and amp is the largest sampled magnitude.
    """
    K = xi.size
    rows = np.zeros((K, nfft), dtype=np.complex128)
    amp = 0.0
    block = min(_PANEL_BLOCK, nfft)
    for p0 in range(0, n_panels, block):
        p1 = min(p0 + block, n_panels)
        vals = _block_values(freqs, coeffs, h, xi, p0, p1)
        amp = max(amp, float(np.abs(vals).max()))
        w = _block_weights(glw, h, xi, p0, p1, tri_span)
        idx = np.arange(p0, p1) % nfft
        rows[:, idx] += (w * vals).T
    return rows, amp


def fold_samples(samples, xi, glw, h, n_panels, tri_span, nfft):
    """Like fold_poly but for caller-supplied samples (panel-major)."""
    K = xi.size
    rows = np.zeros((K, nfft), dtype=np.complex128)
    block = min(_PANEL_BLOCK, nfft)
    for p0 in range(0, n_panels, block):
        p1 = min(p0 + block, n_panels)
        s = samples[p0 * K : p1 * K].reshape(-1, K)
        w = _block_weights(glw, h, xi, p0, p1, tri_span)
        idx = np.arange(p0, p1) % nfft
        rows[:, idx] += (w * s).T
    return rows
