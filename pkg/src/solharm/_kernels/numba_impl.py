"""Numba kernel backend.

Scalar loops with per-term phase recurrences: within a panel block the
phase advances by one complex multiply per panel, and every _RESYNC panels
it is recomputed from a range-reduced argument so rounding cannot drift.
Reductions carry Kahan compensation; fastmath stays off because compensated
summation needs strict IEEE ordering.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_TWO_PI = 2.0 * np.pi
_RESYNC = 512  # panels between exact phase recomputations


@njit(cache=True)
def _cis_turns(turns):
    t = turns - np.floor(turns)
    return complex(np.cos(_TWO_PI * t), np.sin(_TWO_PI * t))


@njit(cache=True)
def eval_cisum(freqs, coeffs, xs):
    n = xs.shape[0]
    J = freqs.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        acc = 0.0 + 0.0j
        for j in range(J):
            acc += coeffs[j] * _cis_turns(freqs[j] * xs[i])
        out[i] = acc
    return out


@njit(cache=True)
def weighted_sum(samples, xi, glw, h, n_panels, tri_span):
    K = glw.shape[0]
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for p in range(n_panels):
        u0 = p * h
        for k in range(K):
            w = glw[k]
            if tri_span > 0.0:
                u = u0 + xi[k]
                w *= min(u, tri_span - u)
            term = w * samples[p * K + k]
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


@njit(cache=True)
def weighted_sum_abs2(samples, xi, glw, h, n_panels, tri_span):
    K = glw.shape[0]
    s = 0.0
    comp = 0.0
    for p in range(n_panels):
        u0 = p * h
        for k in range(K):
            w = glw[k]
            if tri_span > 0.0:
                u = u0 + xi[k]
                w *= min(u, tri_span - u)
            v = samples[p * K + k]
            term = w * (v.real * v.real + v.imag * v.imag)
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


@njit(cache=True)
def poly_weighted_sum(freqs, coeffs, h, xi, glw, n_panels, tri_span, abs2):
    J = freqs.shape[0]
    K = xi.shape[0]
    zeta = np.empty((J, K), dtype=np.complex128)
    step = np.empty(J, dtype=np.complex128)
    fh = np.empty(J, dtype=np.float64)
    z = np.empty(J, dtype=np.complex128)
    for j in range(J):
        fh[j] = freqs[j] * h
        step[j] = _cis_turns(fh[j])
        for k in range(K):
            zeta[j, k] = _cis_turns(freqs[j] * xi[k])
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for p in range(n_panels):
        if p % _RESYNC == 0:
            for j in range(J):
                z[j] = _cis_turns(fh[j] * p)
        u0 = p * h
        for k in range(K):
            v = 0.0 + 0.0j
            for j in range(J):
                v += coeffs[j] * (z[j] * zeta[j, k])
            w = glw[k]
            if tri_span > 0.0:
                u = u0 + xi[k]
                w *= min(u, tri_span - u)
            if abs2:
                term = complex(w * (v.real * v.real + v.imag * v.imag), 0.0)
            else:
                term = w * v
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
        for j in range(J):
            z[j] = z[j] * step[j]
    return s


@njit(cache=True)
def fold_poly(freqs, coeffs, h, xi, glw, n_panels, tri_span, nfft):
    J = freqs.shape[0]
    K = xi.shape[0]
    zeta = np.empty((J, K), dtype=np.complex128)
    step = np.empty(J, dtype=np.complex128)
    fh = np.empty(J, dtype=np.float64)
    z = np.empty(J, dtype=np.complex128)
    for j in range(J):
        fh[j] = freqs[j] * h
        step[j] = _cis_turns(fh[j])
        for k in range(K):
            zeta[j, k] = _cis_turns(freqs[j] * xi[k])
    rows = np.zeros((K, nfft), dtype=np.complex128)
    amp2 = 0.0
    for p in range(n_panels):
        if p % _RESYNC == 0:
            for j in range(J):
                z[j] = _cis_turns(fh[j] * p)
        u0 = p * h
        col = p % nfft
        for k in range(K):
            v = 0.0 + 0.0j
            for j in range(J):
                v += coeffs[j] * (z[j] * zeta[j, k])
            m2 = v.real * v.real + v.imag * v.imag
            if m2 > amp2:
                amp2 = m2
            w = glw[k]
            if tri_span > 0.0:
                u = u0 + xi[k]
                w *= min(u, tri_span - u)
            rows[k, col] += w * v
        for j in range(J):
            z[j] = z[j] * step[j]
    return rows, np.sqrt(amp2)


@njit(cache=True)
def fold_samples(samples, xi, glw, h, n_panels, tri_span, nfft):
    K = xi.shape[0]
    rows = np.zeros((K, nfft), dtype=np.complex128)
    for p in range(n_panels):
        u0 = p * h
        col = p % nfft
        for k in range(K):
            w = glw[k]
            if tri_span > 0.0:
                u = u0 + xi[k]
                w *= min(u, tri_span - u)
            rows[k, col] += w * samples[p * K + k]
    return rows
