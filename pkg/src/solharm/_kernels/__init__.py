"""Hot numeric kernels with two interchangeable backends.

Everything that touches millions of quadrature nodes lives here: evaluation
of finite exponential sums on sample grids, weighted window reductions, and
the folded panel accumulation that feeds the FFT-based frequency scan.

The default backend is numba (@njit, cached); setting the environment
variable SOLH_DISABLE_NUMBA=1 selects the pure-numpy fallback, and an
unavailable numba falls back automatically.  Both backends use compensated
accumulation (Kahan in the jitted loops, blocked pairwise summation with
Kahan combination in numpy), so reductions are independent of evaluation
order; cross-backend agreement is ~1e-13 relative on unit-scale arguments
and limited by phase-product rounding (about |max_freq * T| * eps in turns)
on horizon-scale sample grids.  ``benchmarks/bench_kernels.py`` compares
the two.

Sample layout convention: composite Gauss-Legendre panels of width h, node
k of panel p sits at u = p*h + xi[k], and flat arrays are panel-major
(index p*K + k).  A nonnegative ``tri_span`` applies the triangular window
weight min(u, tri_span - u) used by the iterated (double) mean.
"""

from __future__ import annotations

import os

import numpy as np


def _env_disables_numba() -> bool:
    return os.environ.get("SOLH_DISABLE_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


if _env_disables_numba():
    from . import numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl

        BACKEND = "numpy"

eval_cisum = _impl.eval_cisum
weighted_sum = _impl.weighted_sum
weighted_sum_abs2 = _impl.weighted_sum_abs2
poly_weighted_sum = _impl.poly_weighted_sum
fold_poly = _impl.fold_poly
fold_samples = _impl.fold_samples


def panel_rule(n_nodes: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes xi in (0, h) and weights summing to h."""
    g, gw = np.polynomial.legendre.leggauss(n_nodes)
    xi = (g + 1.0) * (0.5 * h)
    glw = gw * (0.5 * h)
    return xi, glw


def panel_nodes(h: float, xi: np.ndarray, n_panels: int) -> np.ndarray:
    """All node positions, panel-major, as one flat float64 array."""
    offsets = np.arange(n_panels, dtype=np.float64) * h
    return (offsets[:, None] + xi[None, :]).ravel()
