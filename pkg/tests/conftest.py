"""Shared fixtures: the seeded random function corpus and kernel warm-up."""

from fractions import Fraction

import numpy as np
import pytest

from solharm.fourier import farey_frequencies
from solharm.funcspace import SolenoidPoly

CORPUS_SEED = 20240811


def make_corpus(n: int = 50, seed: int = CORPUS_SEED) -> list[SolenoidPoly]:
    """Random trig sums: 2..8 terms, denominators <= 12, |q| <= 6, |coeff| in [0.25, 1]."""
    rng = np.random.default_rng(seed)
    grid = farey_frequencies(12, 6)
    corpus = []
    for _ in range(n):
        k = int(rng.integers(2, 9))
        picks = rng.choice(len(grid), size=k, replace=False)
        mags = 0.25 + 0.75 * rng.random(k)
        phases = np.exp(2j * np.pi * rng.random(k))
        corpus.append(
            SolenoidPoly(
                [(complex(m * p), grid[int(i)]) for m, p, i in zip(mags, phases, picks)]
            )
        )
    return corpus


@pytest.fixture(scope="session")
def corpus() -> list[SolenoidPoly]:
    return make_corpus()


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile/cache the jitted kernels so timed tests measure steady state."""
    from solharm import _kernels

    freqs = np.array([0.5, -1.5])
    coeffs = np.array([1.0 + 0.5j, 0.25j])
    xs = np.linspace(0.0, 3.0, 64)
    _kernels.eval_cisum(freqs, coeffs, xs)
    xi, glw = _kernels.panel_rule(8, 0.5)
    nodes = _kernels.panel_nodes(0.5, xi, 6)
    samples = np.exp(2j * np.pi * nodes)
    _kernels.weighted_sum(samples, xi, glw, 0.5, 6, -1.0)
    _kernels.weighted_sum_abs2(samples, xi, glw, 0.5, 6, 3.0)
    _kernels.poly_weighted_sum(freqs, coeffs, 0.5, xi, glw, 6, -1.0, False)
    _kernels.poly_weighted_sum(freqs, coeffs, 0.5, xi, glw, 6, 3.0, True)
    _kernels.fold_poly(freqs, coeffs, 0.5, xi, glw, 6, -1.0, 8)
    _kernels.fold_samples(samples, xi, glw, 0.5, 6, -1.0, 8)
    return _kernels.BACKEND
