"""Coefficient extraction against product characters, spectra, and the
identities that make the series usable: orthogonality-based selection,
leaf/transversal factorization, the power identity, uniqueness, and uniform
approximation by partial sums.

Two computation routes exist for every quantity and are kept deliberately
independent.  The exact route works on the symbolic term lists with rational
arithmetic (coefficients are read off by character orthogonality, which is
exact).  The numeric route samples leaf restrictions and runs windowed
quadrature means; it exists to cross-validate the exact route and to analyze
black-box leaf data.

The black-box candidate scan exploits that all candidate frequencies share a
common denominator D and that panels of width 1/H put every panel phase on
the lattice of (H*D)-th roots of unity: the per-candidate quadrature sums
are then exactly values of one zero-padded FFT per panel node, which turns a
candidates-times-nodes scan into a handful of FFTs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .characters import (
    ProductCharacter,
    SolenoidCharacter,
    _cis,
    descends,
    eval_zhat,
    haar_pairing,
)
from .errors import DomainError, SolharmError
from .funcspace import (
    LeafFunction,
    LimitPeriodicSeries,
    SolenoidPoly,
    grid_span_for,
    uniform_grid,
)
from .meanval import (
    SCHEME_CESARO,
    SCHEME_EXACT,
    SCHEME_WINDOW,
    MeanEstimate,
    poly_mean_numeric,
    scheme_leak,
)
from .profinite import DEFAULT_TOWER, ProfiniteInt, approx_sequence, embed_int
from .rationals import RationalAngle, frac_angle

SCAN_NODES_PER_PANEL = 16


@dataclass(frozen=True)
class TransversalFactor:
    """The unit character by which a leaf coefficient varies with the
    transversal position: for frequency q it is the angle character of
    frac(q), the limit of e(q * t_n) along integer approximants of t.
    """

    freq: Fraction

    @property
    def angle(self) -> RationalAngle:
        return frac_angle(self.freq)

    def __call__(self, t: ProfiniteInt | int) -> complex:
        return eval_zhat(self.angle, t)


def transversal_factor(
    freq: Fraction, t: ProfiniteInt, depth: int | None = None
) -> complex:
    """e(freq * t_n) at the depth-th integer approximant of t.

    The value stabilizes (and equals the angle character of frac(freq) at t)
    as soon as the tower level at that depth is divisible by the denominator
    of freq; with no explicit depth the first such level is used.
    """
    freq = Fraction(freq)
    b = freq.denominator
    if depth is None:
        level = t.tower.resolve_level(b)
        if level is None:
            from .errors import PrecisionError
            from .profinite import lcm_depth_required

            raise PrecisionError(b, lcm_depth_required(b))
        depth = level + 1
    t_n = approx_sequence(t, depth)
    phase = freq * t_n
    return _cis(float(phase - math.floor(phase)))


def leaf_coefficient(
    fn: SolenoidPoly | LimitPeriodicSeries,
    t: ProfiniteInt | int,
    freq: Fraction | int,
    *,
    scheme: str = SCHEME_EXACT,
    T: float | None = None,
) -> complex:
    """Coefficient of the given frequency in the leaf restriction at t.

    Exact route: character orthogonality reads it off the term list (zero
    off the support).  Numeric route: windowed mean of the leaf against the
    conjugated frequency character at horizon T.
    """
    freq = Fraction(freq)
    if scheme == SCHEME_EXACT:
        return LeafFunction(fn, t).coeff(freq)
    if T is None:
        raise DomainError("numeric leaf coefficient needs a horizon T")
    est = poly_mean_numeric(
        LeafFunction(fn, t), T, scheme=scheme, freq_shift=freq
    )
    return est.value


def transform(
    fn: SolenoidPoly | LimitPeriodicSeries,
    char: ProductCharacter | SolenoidCharacter,
    *,
    scheme: str = SCHEME_EXACT,
    T: float | None = None,
) -> complex:
    """Coefficient of fn against a product character (conjugated pairing).

    Factorizes as (base-leaf coefficient at the character's frequency) times
    the exact Haar pairing of the transversal-variation character with the
    character's angle part; the pairing is 1 when the angle equals
    frac(freq) and 0 otherwise, so non-descending characters get exactly 0.
    """
    if isinstance(char, SolenoidCharacter):
        char = char.as_product()
    if scheme == SCHEME_EXACT:
        base = leaf_coefficient(fn, 0, char.freq)
        pairing = haar_pairing(frac_angle(char.freq), char.angle)
        return base * pairing
    if T is None:
        raise DomainError("numeric transform needs a horizon T")
    poly = fn if isinstance(fn, SolenoidPoly) else fn.to_poly()[0]
    modulus = math.lcm(
        char.angle.b, *(term.char.angle.b for term in poly.terms)
    ) if poly.terms else char.angle.b
    total = 0.0 + 0.0j
    for r in range(modulus):
        inner = poly_mean_numeric(
            poly, T, t=embed_int(r), scheme=scheme, freq_shift=char.freq
        ).value
        total += inner * eval_zhat(char.angle, r).conjugate()
    return total / modulus


def farey_frequencies(max_den: int, max_abs: Fraction | int) -> tuple[Fraction, ...]:
    """All reduced rationals with denominator <= max_den and |q| <= max_abs."""
    if max_den < 1:
        raise DomainError("max_den must be >= 1")
    out = set()
    max_abs = Fraction(max_abs)
    for b in range(1, max_den + 1):
        top = int(max_abs * b)
        for a in range(-top, top + 1):
            q = Fraction(a, b)
            if abs(q) <= max_abs:
                out.add(q)
    return tuple(sorted(out))


@dataclass
class Spectrum:
    """Finite character-to-coefficient map with a power diagnostic.

    ``residual_power`` is the mean of the squared magnitude minus the sum of
    squared coefficient magnitudes: zero for exact finite readouts, a small
    nonnegative detection residue for scanned data.
    """

    entries: dict[SolenoidCharacter, complex]
    residual_power: float = 0.0

    def support(self) -> set[Fraction]:
        return {char.q for char in self.entries}

    def coeff(self, q: Fraction | int) -> complex:
        return self.entries.get(SolenoidCharacter(Fraction(q)), 0.0 + 0.0j)

    @property
    def sum_sq(self) -> float:
        # real*real + imag*imag, not abs()**2: keeps exact cases exactly equal
        return float(
            math.fsum(c.real * c.real + c.imag * c.imag for c in self.entries.values())
        )

    def sorted_terms(self) -> list[tuple[SolenoidCharacter, complex]]:
        """Deterministic order: |coeff| desc, denominator asc, |q| asc, q asc."""
        return sorted(
            self.entries.items(),
            key=lambda item: (
                -abs(item[1]),
                item[0].q.denominator,
                abs(item[0].q),
                item[0].q,
            ),
        )

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class ScanInfo:
    """Diagnostics of a black-box candidate scan."""

    scheme: str
    horizon: float
    amplitude: float
    resolution: float
    error_bound: float
    threshold: float
    n_candidates: int


def _scan_candidates(
    sample_source,
    candidates: Sequence[Fraction],
    *,
    T: float,
    scheme: str,
    leaf_max_freq: float,
    nodes_per_period: int = 32,
) -> tuple[dict[Fraction, complex], float, float]:
    """Windowed means of f * conj(e(q x)) for every candidate q at once.

    ``sample_source`` is either a (freqs, coeffs) pair describing the leaf
    polynomial or a vectorized callable.  Returns (estimates, amplitude,
    actual horizon).
    """
    if scheme not in (SCHEME_WINDOW, SCHEME_CESARO):
        raise DomainError(f"unknown scan scheme {scheme!r}")
    if not candidates:
        return {}, 0.0, float(T)
    tri = scheme == SCHEME_CESARO
    D = math.lcm(*(q.denominator for q in candidates))
    max_cand = max(abs(float(q)) for q in candidates)
    f_int_max = leaf_max_freq + max_cand
    K = SCAN_NODES_PER_PANEL
    H = max(1, math.ceil(nodes_per_period * f_int_max / K))
    h = 1.0 / H
    n_half = max(1, round(T * H))
    T_act = n_half * h
    n_panels = 2 * n_half if tri else n_half
    nfft = H * D
    tri_span = 2.0 * T_act if tri else -1.0
    xi, glw = _kernels.panel_rule(K, h)
    if callable(sample_source):
        nodes = _kernels.panel_nodes(h, xi, n_panels)
        samples = np.asarray(sample_source(nodes), dtype=np.complex128)
        if samples.shape != nodes.shape:
            raise DomainError("scan callable must be vectorized over x")
        amp = float(np.abs(samples).max()) if samples.size else 0.0
        rows = _kernels.fold_samples(samples, xi, glw, h, n_panels, tri_span, nfft)
    else:
        freqs, coeffs = sample_source
        rows, amp = _kernels.fold_poly(
            np.asarray(freqs, dtype=np.float64),
            np.asarray(coeffs, dtype=np.complex128),
            h,
            xi,
            glw,
            n_panels,
            tri_span,
            nfft,
        )
    spectra = np.fft.fft(rows, axis=1)  # [K, nfft]
    prefac = 1.0 / (T_act * T_act) if tri else 1.0 / T_act
    estimates: dict[Fraction, complex] = {}
    for q in candidates:
        m = q.numerator * (D // q.denominator)
        col = spectra[:, m % nfft]
        zeta = np.array([_cis(-float(q) * x) for x in xi])
        estimates[q] = complex(prefac * np.sum(zeta * col))
    return estimates, amp, T_act


def _candidate_resolution(candidates: Sequence[Fraction]) -> float:
    vals = sorted(float(q) for q in candidates)
    gaps = [b - a for a, b in zip(vals, vals[1:]) if b > a]
    return min(gaps) if gaps else 1.0


def spectrum(
    fn,
    candidates: Iterable[Fraction] | None = None,
    *,
    T: float = 1e4,
    scheme: str = SCHEME_CESARO,
    threshold_factor: float = 5.0,
    max_den: int = 12,
    max_abs: Fraction | int = 6,
    max_freq: float | None = None,
    series_tol: float = 1e-13,
    with_info: bool = False,
):
    """Coefficient spectrum of fn.

    Symbolic inputs are read out exactly (candidates default to their own
    support).  Leaf functions and vectorized callables are scanned over the
    candidate grid (default: reduced rationals with denominator <= max_den
    and magnitude <= max_abs); a candidate enters the spectrum when its
    estimated magnitude exceeds threshold_factor times the scan error bound.
    """
    if isinstance(fn, SolenoidPoly):
        spec = Spectrum({t.char: t.coeff for t in fn.terms}, 0.0)
        return (spec, None) if with_info else spec
    if isinstance(fn, LimitPeriodicSeries):
        poly, tail = fn.to_poly(tol=series_tol)
        # the discarded tail carries at most tail^2 of squared magnitude
        spec = Spectrum({t.char: t.coeff for t in poly.terms}, tail * tail)
        return (spec, None) if with_info else spec

    if candidates is None:
        candidates = farey_frequencies(max_den, max_abs)
    candidates = tuple(Fraction(q) for q in candidates)
    if isinstance(fn, LeafFunction):
        source = (fn.freqs, fn.coeffs)
        leaf_max = fn.max_abs_freq
        power_fn = fn
    elif callable(fn):
        if max_freq is None:
            raise DomainError("black-box scan needs max_freq for a raw callable")
        source = fn
        leaf_max = float(max_freq)
        power_fn = None
    else:
        raise DomainError(f"cannot extract a spectrum from {type(fn)!r}")

    estimates, amp, T_act = _scan_candidates(
        source, candidates, T=T, scheme=scheme, leaf_max_freq=leaf_max
    )
    resolution = _candidate_resolution(candidates)
    bound = amp * scheme_leak(scheme, resolution, T_act)
    threshold = threshold_factor * bound
    entries = {
        SolenoidCharacter(q): est
        for q, est in estimates.items()
        if abs(est) > threshold
    }
    sum_sq = float(
        math.fsum(c.real * c.real + c.imag * c.imag for c in entries.values())
    )
    if power_fn is not None:
        power = poly_mean_numeric(power_fn, T_act, scheme=scheme, power=True).value.real
    else:
        power = sum_sq
    spec = Spectrum(entries, power - sum_sq)
    if with_info:
        info = ScanInfo(
            scheme, T_act, amp, resolution, bound, threshold, len(candidates)
        )
        return spec, info
    return spec


@dataclass
class ParsevalReport:
    sum_sq: float
    mean_sq: float
    gap: float
    scheme: str
    horizon: float | None


def parseval_check(
    fn: SolenoidPoly | LimitPeriodicSeries,
    *,
    scheme: str = SCHEME_EXACT,
    T: float | None = None,
    t: ProfiniteInt | int = 0,
) -> ParsevalReport:
    """Sum of squared coefficients vs. the mean of the squared magnitude.

    The two sides are computed by independent routes: the left from the term
    list, the right either by exact expansion of |fn|^2 into characters and
    reading its constant term, or by a windowed quadrature mean of the
    sampled squared magnitude at horizon T (the iterated scheme by default
    for its quadratically small leakage).
    """
    poly = fn if isinstance(fn, SolenoidPoly) else fn.to_poly()[0]
    sum_sq = float(
        math.fsum(
            term.coeff.real * term.coeff.real + term.coeff.imag * term.coeff.imag
            for term in poly.terms
        )
    )
    if scheme == SCHEME_EXACT:
        mean_sq = poly.abs_square().coeff(0).real
        return ParsevalReport(sum_sq, float(mean_sq), abs(sum_sq - mean_sq), scheme, None)
    if T is None:
        raise DomainError("numeric power mean needs a horizon T")
    est = poly_mean_numeric(poly, T, t=t, scheme=scheme, power=True)
    mean_sq = est.value.real
    return ParsevalReport(
        sum_sq, float(mean_sq), abs(sum_sq - mean_sq), scheme, est.horizon
    )


def uniqueness_check(
    fn: SolenoidPoly,
    other: SolenoidPoly,
    *,
    n_points: int = 1000,
    coeff_tol: float = 1e-12,
    sup_tol: float = 1e-10,
    seed: int = 0,
) -> bool:
    """Equal spectra if and only if equal functions, checked both ways.

    Compares the coefficient maps at coeff_tol and the sampled sup gap at
    sup_tol, and raises if the two verdicts disagree (which would violate
    uniqueness); returns whether the functions agree.
    """
    a, b = fn.coeff_map, other.coeff_map
    spectra_equal = set(a) == set(b) and all(
        abs(a[q] - b[q]) <= coeff_tol for q in a
    )
    diff = fn - other
    rng = np.random.default_rng(seed)
    tower = DEFAULT_TOWER
    n_t = 5
    n_x = math.ceil(n_points / n_t)
    span = grid_span_for(diff) if diff.terms else 1.0
    sup_gap = 0.0
    for i in range(n_t):
        t = embed_int(0 if i == 0 else int(rng.integers(0, tower.top)), tower)
        xs = rng.uniform(0.0, span, n_x)
        vals = diff.eval_grid(xs, t)
        sup_gap = max(sup_gap, float(np.abs(vals).max()) if vals.size else 0.0)
    functions_equal = sup_gap < sup_tol
    if spectra_equal != functions_equal:
        raise SolharmError(
            f"uniqueness violated: spectra_equal={spectra_equal} but "
            f"sampled sup gap {sup_gap:.3e}"
        )
    return spectra_equal


def partial_sum(spec: Spectrum, n: int) -> SolenoidPoly:
    """The n largest terms of the spectrum in the deterministic order."""
    if n < 0:
        raise DomainError("partial-sum length must be nonnegative")
    chosen = spec.sorted_terms()[:n]
    return SolenoidPoly((coeff, char.q) for char, coeff in chosen)


@dataclass
class ApproxRow:
    n: int
    sup_error: float
    majorant_bound: float | None


def approx_report(
    fn: SolenoidPoly | LimitPeriodicSeries,
    n_list: Sequence[int],
    *,
    density: int = 64,
    span: float | None = None,
    t_samples: Sequence[int] = (0, 1, 7),
    series_tol: float = 1e-13,
) -> list[ApproxRow]:
    """Grid sup errors of the partial sums against the full function.

    Finite sums use their own spectrum in the deterministic order; series
    use their generation order and report the majorant tail alongside.  The
    grid contains the origin and runs over one common period (capped), at
    the stated density per smallest period, for each sampled transversal.
    """
    if isinstance(fn, LimitPeriodicSeries):
        reference, _ = fn.to_poly(tol=series_tol)
        partials = {n: fn.truncate(n) for n in n_list}
        bounds = {n: fn.tail_bound(n) for n in n_list}
    else:
        reference = fn
        spec = Spectrum({t.char: t.coeff for t in fn.terms}, 0.0)
        partials = {n: partial_sum(spec, n) for n in n_list}
        bounds = {n: None for n in n_list}
    if span is None:
        span = grid_span_for(reference)
    xs = uniform_grid(reference.max_abs_freq, density=density, span=span)
    rows = []
    ts = [embed_int(int(t)) for t in t_samples]
    ref_vals = [reference.eval_grid(xs, t) for t in ts]
    for n in n_list:
        diff = 0.0
        for t, ref in zip(ts, ref_vals):
            vals = partials[n].eval_grid(xs, t)
            diff = max(diff, float(np.abs(vals - ref).max()))
        rows.append(ApproxRow(int(n), diff, bounds[n]))
    return rows


def descend_spectrum(
    product_entries: Mapping[ProductCharacter, complex]
    | Iterable[tuple[ProductCharacter, complex]],
) -> Spectrum:
    """Reindex a spectrum over product characters by rational frequency.

    Every support character must descend (angle equal to the fractional part
    of the frequency); a non-descending entry means the data did not come
    from an invariant function and is a domain error.
    """
    items = (
        product_entries.items()
        if isinstance(product_entries, Mapping)
        else product_entries
    )
    entries: dict[SolenoidCharacter, complex] = {}
    for char, coeff in items:
        if not descends(char):
            raise DomainError(
                f"character (freq={char.freq}, angle={char.angle}) does not "
                "descend; such a coefficient cannot arise from an invariant function"
            )
        entries[SolenoidCharacter(char.freq)] = complex(coeff)
    return Spectrum(entries, 0.0)
