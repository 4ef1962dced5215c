"""Transform selection, transversal variation, spectra, partial sums."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from solharm.characters import ProductCharacter, SolenoidCharacter, eval_zhat
from solharm.errors import DomainError
from solharm.fourier import (
    Spectrum,
    TransversalFactor,
    approx_report,
    descend_spectrum,
    farey_frequencies,
    leaf_coefficient,
    parseval_check,
    partial_sum,
    spectrum,
    transform,
    transversal_factor,
    uniqueness_check,
)
from solharm.funcspace import LeafFunction, SolenoidPoly, uniform_grid
from solharm.meanval import SCHEME_CESARO, SCHEME_WINDOW
from solharm.profinite import embed_int
from solharm.rationals import RationalAngle, frac_angle

from _helpers import dyadic_series


def brute_force_transform(poly: SolenoidPoly, char: ProductCharacter) -> complex:
    """Independent oracle: exact leaf coefficient per residue class, then the
    plain cylinder average against the conjugated angle character."""
    modulus = math.lcm(char.angle.b, *(t.char.angle.b for t in poly.terms)) if poly.terms else char.angle.b
    total = 0.0 + 0.0j
    for r in range(modulus):
        # exact mean over x of leaf(x) e(-freq x): picks the matching term
        inner = 0.0 + 0.0j
        for term in poly.terms:
            if term.freq == char.freq:
                inner += term.coeff * eval_zhat(term.char.angle, r)
        total += inner * eval_zhat(char.angle, r).conjugate()
    return total / modulus


class TestLeafCoefficient:
    def test_on_support(self):
        poly = SolenoidPoly([(4.0, Fraction(2))])
        assert leaf_coefficient(poly, 0, Fraction(2)) == 4.0

    def test_off_support_exact_zero(self):
        poly = SolenoidPoly([(4.0, Fraction(2))])
        assert leaf_coefficient(poly, 0, Fraction(1, 2)) == 0.0

    def test_shifted_leaf_phase(self):
        poly = SolenoidPoly([(1.0, Fraction(1, 2))])
        got = leaf_coefficient(poly, embed_int(1), Fraction(1, 2))
        assert got == pytest.approx(-1.0)

    def test_numeric_agrees(self):
        poly = SolenoidPoly([(2.0 - 1j, Fraction(1, 3)), (0.5, Fraction(2))])
        t = embed_int(5)
        exact = leaf_coefficient(poly, t, Fraction(1, 3))
        numeric = leaf_coefficient(
            poly, t, Fraction(1, 3), scheme=SCHEME_CESARO, T=1000.0
        )
        assert abs(exact - numeric) < 1e-5


class TestTransversalFactor:
    def test_integer_frequency_trivial(self):
        for n in (-2, 0, 3):
            assert transversal_factor(Fraction(n), embed_int(7)) == 1.0

    def test_third_at_two(self):
        got = transversal_factor(Fraction(1, 3), embed_int(2))
        assert got == pytest.approx(cmath.exp(4j * math.pi / 3), abs=1e-15)

    def test_stabilizes_once_denominator_resolves(self):
        t = embed_int(11)
        freq = Fraction(2, 5)
        resolved = t.tower.resolve_level(5) + 1
        reference = transversal_factor(freq, t)
        for depth in range(resolved, t.tower.depth + 1):
            assert transversal_factor(freq, t, depth) == pytest.approx(reference, abs=1e-14)

    def test_equals_fractional_angle_character(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            freq = Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 13)))
            t = embed_int(int(rng.integers(-10**5, 10**5)))
            assert abs(
                transversal_factor(freq, t) - eval_zhat(frac_angle(freq), t)
            ) < 1e-13

    def test_character_law(self):
        rng = np.random.default_rng(32)
        for _ in range(300):
            freq = Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 13)))
            factor = TransversalFactor(freq)
            s = embed_int(int(rng.integers(-10**5, 10**5)))
            t = embed_int(int(rng.integers(-10**5, 10**5)))
            assert abs(factor(s + t) - factor(s) * factor(t)) < 1e-12


class TestTransform:
    def test_matching_character(self):
        poly = SolenoidPoly([(1.0, Fraction(3, 2))])
        char = ProductCharacter(Fraction(3, 2), RationalAngle(1, 2))
        assert transform(poly, char) == 1.0
        assert brute_force_transform(poly, char) == pytest.approx(1.0, abs=1e-14)

    def test_frequency_mismatch(self):
        poly = SolenoidPoly([(1.0, Fraction(3, 2))])
        char = ProductCharacter(Fraction(1, 2), RationalAngle(1, 2))
        assert transform(poly, char) == 0.0
        assert brute_force_transform(poly, char) == pytest.approx(0.0, abs=1e-14)

    def test_angle_mismatch_selects_zero(self, corpus):
        for poly in corpus[:5]:
            term = poly.terms[0]
            wrong = ProductCharacter(
                term.freq, term.char.angle + RationalAngle(1, 5)
            )
            assert transform(poly, wrong) == 0.0

    def test_agrees_with_brute_force(self, corpus):
        rng = np.random.default_rng(33)
        for poly in corpus[:8]:
            term = poly.terms[int(rng.integers(0, len(poly)))]
            char = term.char.as_product()
            assert abs(transform(poly, char) - brute_force_transform(poly, char)) < 1e-12

    def test_solenoid_character_argument(self):
        poly = SolenoidPoly([(2.5j, Fraction(5, 3))])
        assert transform(poly, SolenoidCharacter(Fraction(5, 3))) == 2.5j

    def test_numeric_route_agrees(self):
        poly = SolenoidPoly([(1.0, Fraction(1, 2)), (2.0, Fraction(0))])
        char = ProductCharacter(Fraction(1, 2), RationalAngle(1, 2))
        numeric = transform(poly, char, scheme=SCHEME_CESARO, T=500.0)
        assert abs(numeric - 1.0) < 1e-4
        off = transform(
            poly, ProductCharacter(Fraction(1, 2), RationalAngle(1, 3)),
            scheme=SCHEME_CESARO, T=500.0,
        )
        assert abs(off) < 1e-4

    def test_factorization_identity(self, corpus):
        rng = np.random.default_rng(34)
        for poly in corpus[:10]:
            freq = poly.terms[int(rng.integers(0, len(poly)))].freq
            t = embed_int(int(rng.integers(-10**5, 10**5)))
            lhs = leaf_coefficient(poly, t, freq)
            rhs = TransversalFactor(freq)(t) * leaf_coefficient(poly, 0, freq)
            assert abs(lhs - rhs) < 1e-12


class TestFareyGrid:
    def test_small_grid(self):
        got = farey_frequencies(2, 1)
        assert got == tuple(
            Fraction(*p) for p in [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)]
        )

    def test_reduced_and_bounded(self):
        grid = farey_frequencies(12, 6)
        assert all(abs(q) <= 6 and q.denominator <= 12 for q in grid)
        assert len(set(grid)) == len(grid)
        assert Fraction(1, 11) in grid and Fraction(-5, 12) in grid


class TestSpectrum:
    def test_symbolic_readout(self):
        poly = SolenoidPoly([(2.0, Fraction(1)), (3j, Fraction(1, 2))])
        spec = spectrum(poly)
        assert spec.support() == {Fraction(1), Fraction(1, 2)}
        assert spec.coeff(Fraction(1, 2)) == 3j
        assert spec.residual_power == 0.0

    def test_zero_function(self):
        assert len(spectrum(SolenoidPoly.zero())) == 0

    def test_series_readout(self):
        spec = spectrum(dyadic_series(), series_tol=1e-10)
        assert Fraction(1, 2) in spec.support()
        assert spec.residual_power <= 1e-19

    def test_black_box_recovery_small(self):
        poly = SolenoidPoly([(1.0, Fraction(1, 3)), (0.5j, Fraction(-2)), (0.75, Fraction(0))])
        leaf = LeafFunction(poly, embed_int(0))
        spec, info = spectrum(
            leaf, T=1000.0, max_den=8, max_abs=3, with_info=True
        )
        assert spec.support() == poly.coeff_map.keys()
        for char, coeff in spec.entries.items():
            assert abs(coeff - poly.coeff(char.q)) < 1e-3
        assert spec.residual_power >= -1e-6
        assert info.threshold < 0.25

    def test_black_box_shifted_leaf(self):
        poly = SolenoidPoly([(1.0, Fraction(1, 2)), (2.0, Fraction(1, 3))])
        t = embed_int(5)
        leaf = LeafFunction(poly, t)
        spec = spectrum(leaf, T=1000.0, max_den=6, max_abs=2)
        assert spec.support() == {Fraction(1, 2), Fraction(1, 3)}
        for char, coeff in spec.entries.items():
            assert abs(coeff - leaf.coeff(char.q)) < 1e-3

    def test_raw_callable_needs_max_freq(self):
        with pytest.raises(DomainError):
            spectrum(lambda xs: np.exp(2j * np.pi * xs), candidates=[Fraction(1)], T=100.0)

    def test_raw_callable_scan(self):
        spec = spectrum(
            lambda xs: np.exp(2j * np.pi * xs) * 2.0,
            candidates=farey_frequencies(3, 2),
            T=500.0,
            max_freq=1.0,
        )
        assert spec.support() == {Fraction(1)}
        assert abs(spec.coeff(Fraction(1)) - 2.0) < 1e-3


class TestParseval:
    def test_exact_two_terms(self):
        poly = SolenoidPoly([(2.0, Fraction(1)), (3j, Fraction(1, 2))])
        rep = parseval_check(poly)
        assert rep.sum_sq == pytest.approx(13.0, abs=0)
        assert rep.mean_sq == pytest.approx(13.0, abs=1e-12)
        assert rep.gap < 1e-12

    def test_constant(self):
        rep = parseval_check(SolenoidPoly([(3 - 4j, Fraction(0))]))
        assert rep.sum_sq == rep.mean_sq == 25.0

    def test_exact_gap_zero_on_corpus(self, corpus):
        for poly in corpus[:10]:
            assert parseval_check(poly).gap < 1e-12

    def test_numeric_window_small_horizon(self):
        poly = SolenoidPoly([(2.0, Fraction(1)), (3j, Fraction(1, 2))])
        rep = parseval_check(poly, scheme=SCHEME_WINDOW, T=1e4)
        assert rep.gap <= 1e-2

    def test_numeric_cesaro(self, corpus):
        rep = parseval_check(corpus[0], scheme=SCHEME_CESARO, T=1000.0)
        assert rep.gap <= 1e-3


class TestUniqueness:
    def test_equal(self, corpus):
        assert uniqueness_check(corpus[0], corpus[0])

    def test_reordered_terms(self, corpus):
        poly = corpus[1]
        reordered = SolenoidPoly(list(reversed([(t.coeff, t.freq) for t in poly.terms])))
        assert uniqueness_check(poly, reordered)

    def test_coefficient_bump_detected(self, corpus):
        poly = corpus[2]
        bumped_terms = dict(poly.coeff_map)
        q0 = poly.terms[0].freq
        bumped_terms[q0] = bumped_terms[q0] + 1.0
        bumped = SolenoidPoly.from_coeffs(bumped_terms)
        assert not uniqueness_check(poly, bumped)
        # the difference is one unit character, so its sampled sup is 1
        diff = poly - bumped
        xs = np.linspace(0, 10, 1000)
        assert np.abs(diff.eval_grid(xs, embed_int(0))).max() >= 1 - 1e-6


class TestPartialSums:
    def test_exact_recovery(self, corpus):
        poly = corpus[3]
        spec = spectrum(poly)
        full = partial_sum(spec, len(spec))
        assert len(full - poly) == 0

    def test_ordering_contract(self):
        spec = Spectrum(
            {
                SolenoidCharacter(Fraction(1)): 3.0,
                SolenoidCharacter(Fraction(1, 2)): 1.0 + 0j,
                SolenoidCharacter(Fraction(1, 3)): -1.0 + 0j,
                SolenoidCharacter(Fraction(2, 3)): 0.5j,
                SolenoidCharacter(Fraction(0)): 2.0,
            }
        )
        top2 = partial_sum(spec, 2)
        assert top2.coeff_map == {Fraction(1): 3.0, Fraction(0): 2.0}
        # tie at |c| = 1: smaller denominator wins
        top3 = partial_sum(spec, 3)
        assert Fraction(1, 2) in top3.coeff_map
        with pytest.raises(DomainError):
            partial_sum(spec, -1)

    def test_approx_report_corpus(self, corpus):
        poly = corpus[4]
        rows = approx_report(poly, list(range(len(poly) + 1)))
        errors = [r.sup_error for r in rows]
        assert errors[-1] < 1e-10
        assert all(later <= earlier + 1e-12 for earlier, later in zip(errors, errors[1:]))
        assert rows[0].sup_error == pytest.approx(
            _grid_sup(poly), rel=1e-9
        )

    def test_dyadic_tail_bounds(self):
        series = dyadic_series()
        rows = approx_report(series, [1, 2, 3, 4, 5])
        for row in rows:
            assert row.sup_error <= row.majorant_bound + 1e-12
            assert row.majorant_bound == pytest.approx(2.0 ** -row.n, rel=1e-9)


def _grid_sup(poly):
    from solharm.funcspace import grid_span_for

    xs = uniform_grid(poly.max_abs_freq, span=grid_span_for(poly))
    worst = 0.0
    for t in (0, 1, 7):
        worst = max(worst, float(np.abs(poly.eval_grid(xs, embed_int(t))).max()))
    return worst


class TestDescendSpectrum:
    def test_reindexing(self):
        spec = descend_spectrum(
            {ProductCharacter(Fraction(3, 2), RationalAngle(1, 2)): 2.0}
        )
        assert spec.coeff(Fraction(3, 2)) == 2.0

    def test_empty(self):
        assert len(descend_spectrum({})) == 0

    def test_non_descending_rejected(self):
        with pytest.raises(DomainError):
            descend_spectrum(
                {ProductCharacter(Fraction(1, 2), RationalAngle(1, 3)): 1.0}
            )
