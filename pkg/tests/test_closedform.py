import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

import mp_oracle as mpo
from deltapol import BoundState, DomainError, EstimationError
from deltapol import closedform as cf

# frozen from mp_oracle at 40 digits
ALPHA_PLUS_0375 = 1.4320987654320987654
ALPHA_MINUS_05 = 0.37258300203047921917
ALPHA_MINUS_1 = 0.26794919243112270647
ALPHA_MINUS_3 = 0.12783023072759764703
TOTAL_04 = 1.99787570313157198721
TOTAL_RE_3 = -0.11908334951931593322
ALPHA_PLUS_15 = complex(-0.65432098765432098765, 0.27935082713542618248)
IM_PEAK = 2401 / (256 * math.sqrt(7))


class TestBelowThreshold:
    def test_static(self, unit_state):
        assert cf.alpha_plus_below(unit_state, 0.0) == 0.625

    def test_at_threshold(self, unit_state):
        assert cf.alpha_plus_below(unit_state, 0.5) == 5.0

    def test_quarter_momentum(self, unit_state):
        assert cf.alpha_plus_below(unit_state, 0.375) == pytest.approx(ALPHA_PLUS_0375, rel=1e-15)

    def test_domain(self, unit_state):
        with pytest.raises(DomainError):
            cf.alpha_plus_below(unit_state, 0.6)
        with pytest.raises(DomainError):
            cf.alpha_plus_below(unit_state, -0.1)

    @given(a=st.floats(0.0, 1.0), b=st.floats(0.0, 1.0), g=st.floats(0.3, 3.0))
    def test_strictly_increasing(self, a, b, g):
        s = BoundState.from_g(g)
        lo, hi = sorted((a * s.B, b * s.B))
        if hi - lo > 1e-9 * s.B:
            assert cf.alpha_plus_below(s, lo) < cf.alpha_plus_below(s, hi)


class TestAboveThreshold:
    def test_unit_frequency(self, unit_state):
        assert cf.alpha_plus_above(unit_state, 1.0) == complex(-1.0, 1.0)

    def test_frozen_value(self, unit_state):
        v = cf.alpha_plus_above(unit_state, 1.5)
        assert v.real == pytest.approx(ALPHA_PLUS_15.real, rel=1e-14)
        assert v.imag == pytest.approx(ALPHA_PLUS_15.imag, rel=1e-14)

    def test_im_peak_value(self, unit_state):
        assert cf.alpha_plus_above(unit_state, 4 / 7).imag == pytest.approx(IM_PEAK, rel=1e-14)

    def test_domain(self, unit_state):
        with pytest.raises(DomainError):
            cf.alpha_plus_above(unit_state, 0.5)

    @given(x=st.floats(1.0001, 50.0), g=st.sampled_from([0.5, 1.0, 2.0]))
    def test_matches_analytic_continuation(self, x, g):
        s = BoundState.from_g(g)
        re, im = mpo.alpha_plus_above(x * s.B, g)
        v = cf.alpha_plus_above(s, x * s.B)
        scale = float(abs(re) + abs(im))
        assert abs(v.real - float(re)) < 1e-13 * scale
        assert abs(v.imag - float(im)) < 1e-13 * scale
        assert v.imag >= 0.0


class TestAlphaMinus:
    @pytest.mark.parametrize("omega, expected", [
        (0.0, 0.625), (0.5, ALPHA_MINUS_05), (1.0, ALPHA_MINUS_1), (3.0, ALPHA_MINUS_3),
    ])
    def test_values(self, unit_state, omega, expected):
        assert cf.alpha_minus(unit_state, omega) == pytest.approx(expected, rel=1e-15)

    def test_vanishes_at_infinity(self, unit_state):
        assert cf.alpha_minus(unit_state, 1e12) < 1e-11

    def test_domain(self, unit_state):
        with pytest.raises(DomainError):
            cf.alpha_minus(unit_state, -1.0)

    @given(a=st.floats(0.0, 100.0), b=st.floats(0.0, 100.0))
    def test_positive_and_decreasing(self, a, b):
        s = BoundState.from_g(1.0)
        lo, hi = sorted((a, b))
        assert cf.alpha_minus(s, hi) > 0.0
        if hi - lo > 1e-9:
            assert cf.alpha_minus(s, hi) < cf.alpha_minus(s, lo)


class TestTotal:
    def test_static(self, unit_state):
        p = cf.alpha_total(unit_state, 0.0)
        assert p.total == complex(1.25, 0.0)
        assert p.scaled_total == complex(1.25, 0.0)
        assert p.x == 0.0

    def test_at_threshold(self, unit_state):
        p = cf.alpha_total(unit_state, 0.5)
        assert p.total.real == pytest.approx(5.0 + ALPHA_MINUS_05, rel=1e-15)
        assert p.scaled_total == p.total  # 4B^2 = 1

    def test_unit_frequency(self, unit_state):
        p = cf.alpha_total(unit_state, 1.0)
        assert p.total.real == pytest.approx(-1.0 + ALPHA_MINUS_1, rel=1e-14)
        assert p.total.imag == 1.0

    def test_scaling_general_well(self):
        s = BoundState.from_g(2.0)
        p = cf.alpha_total(s, 0.0)
        assert p.scaled_total.real == pytest.approx(1.25, rel=1e-15)
        assert p.scale == pytest.approx(16.0)

    @given(x=st.floats(0.0, 30.0), g=st.floats(0.3, 3.0))
    def test_point_invariants(self, x, g):
        s = BoundState.from_g(g)
        p = cf.alpha_total(s, x * s.B)
        assert p.total == p.alpha_plus + p.alpha_minus
        assert p.alpha_minus > 0
        if x <= 1.0:
            assert p.alpha_plus.imag == 0.0
        else:
            assert p.alpha_plus.imag >= 0.0


class TestInvariants:
    def test_static_symmetry(self):
        for g in (0.5, 1.0, 3.0):
            s = BoundState.from_g(g)
            assert cf.alpha_plus_below(s, 0.0) == cf.alpha_minus(s, 0.0)

    @pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
    def test_threshold_continuity_scaling(self, g):
        # gap ~ 16 sqrt(2 eps) / k0^5 as eps -> 0 (square-root branch point)
        s = BoundState.from_g(g)
        for eps in (1e-8, 1e-10, 1e-12):
            e = eps * s.B
            gap = cf.threshold_gap(s, e)
            assert gap == pytest.approx(16.0 * math.sqrt(2.0 * e) / s.k0**5, rel=1e-2)
        assert cf.threshold_gap(s, 1e-14 * s.B) * s.k0**4 < 1e-4

    def test_threshold_gap_frozen(self, unit_state):
        assert cf.threshold_gap(unit_state, 1e-6) == pytest.approx(0.02248759801820690884, rel=1e-8)

    def test_im_single_interior_maximum(self, unit_state):
        ws = np.linspace(0.5, 40.0, 20001)[1:]
        im = np.array([cf.alpha_plus_above(unit_state, w).imag for w in ws])
        d = np.sign(np.diff(im))
        assert np.count_nonzero(d[1:] != d[:-1]) == 1
        assert im[-1] < 1e-3 * im.max()
        assert cf.alpha_plus_above(unit_state, 0.5 + 1e-12).imag < 1e-4

    def test_compact_imaginary_identity(self, unit_state):
        for w in np.linspace(0.5, 20.0, 2000)[1:]:
            assert cf.alpha_plus_above(unit_state, w).imag == pytest.approx(cf.im_alpha_compact(w), abs=1e-12)

    def test_large_omega_cancellation(self, unit_state):
        for x in np.linspace(6.0, 400.0, 2000):
            p = cf.alpha_total(unit_state, x * unit_state.B)
            assert abs(p.total.real) < p.alpha_minus

    def test_cancellation_spot_values(self, unit_state):
        p = cf.alpha_total(unit_state, 3.0)
        assert p.total.real == pytest.approx(TOTAL_RE_3, rel=1e-13)
        assert p.alpha_minus == pytest.approx(ALPHA_MINUS_3, rel=1e-14)


class TestLiteratureFormulas:
    def test_ref8_below_static_limit(self):
        assert cf.ref8_alpha_r_below(0.0) == 1.25
        assert cf.ref8_alpha_r_below(1e-6) == pytest.approx(1.25, rel=1e-11)

    @pytest.mark.parametrize("w", [0.0001, 0.01, 0.05, 0.0999, 0.1, 0.2, 0.4, 0.49])
    def test_ref8_below_against_mp(self, w):
        assert cf.ref8_alpha_r_below(w) == pytest.approx(float(mpo.ref8_below(w)), rel=1e-12)

    def test_ref8_below_cross_evaluation(self, unit_state):
        assert cf.ref8_alpha_r_below(0.4) == pytest.approx(TOTAL_04, rel=1e-14)
        assert cf.alpha_total(unit_state, 0.4).total.real == pytest.approx(TOTAL_04, rel=1e-14)

    def test_ref8_above(self):
        assert cf.ref8_alpha_r_above(1.0) == pytest.approx(-1.0 + ALPHA_MINUS_1, rel=1e-14)
        assert cf.ref8_alpha_r_above(3.0) == pytest.approx(TOTAL_RE_3, rel=1e-14)
        assert cf.ref8_alpha_r_above(1e4) == pytest.approx(-1e-8, rel=1e-2)

    def test_regrouped_form(self, unit_state):
        assert cf.regrouped_re_above(1.0) == pytest.approx(cf.alpha_total(unit_state, 1.0).total.real, abs=1e-12)
        assert cf.regrouped_re_above(3.0) == pytest.approx(TOTAL_RE_3, rel=1e-13)

    def test_regrouped_rational_part_is_re_alpha_plus(self):
        w = sp.symbols("w", positive=True)
        rational = (2 - 2 * w - w**2 - w**3) / (2 * w**4)
        lam2 = 2 * w - 1
        d = 1 + lam2
        eq16 = -1 / d - 2 / d**2 - 8 / d**3 + 16 / d**4
        assert sp.simplify(rational - eq16) == 0

    def test_compact_im(self):
        assert cf.im_alpha_compact(1.0) == 1.0
        assert cf.im_alpha_compact(4 / 7) == pytest.approx(IM_PEAK, rel=1e-14)
        assert cf.im_alpha_compact(0.5 + 1e-14) == pytest.approx(16 * math.sqrt(2e-14), rel=1e-3)

    @pytest.mark.parametrize("fn, bad", [
        (cf.ref8_alpha_r_below, 0.5),
        (cf.ref8_alpha_r_above, 0.5),
        (cf.regrouped_re_above, 0.4),
        (cf.im_alpha_compact, 0.5),
    ])
    def test_domains(self, fn, bad):
        with pytest.raises(DomainError):
            fn(bad)

    def test_ref8_series_requires_unit_well(self):
        with pytest.raises(DomainError):
            cf.small_omega_series(BoundState.from_g(2.0), "ref8")


class TestSeries:
    def test_exact_series_of_both_forms(self):
        # independent symbolic oracle: both even functions share the expansion
        w = sp.symbols("w")
        three = lambda s: 1 / s**2 + 2 / s**3 + 2 / s**4  # noqa: E731
        pair = three(1 + sp.sqrt(1 - 2 * w)) + three(1 + sp.sqrt(1 + 2 * w))
        ref8 = (2 - w**2 - sp.sqrt(1 + 2 * w) - sp.sqrt(1 - 2 * w)) / w**4
        for expr in (pair, ref8):
            ser = sp.series(expr, w, 0, 4).removeO()
            assert ser.coeff(w, 0) == sp.Rational(5, 4)
            assert ser.coeff(w, 1) == 0
            assert ser.coeff(w, 2) == sp.Rational(21, 8)

    def test_alpha_total_series(self, unit_state):
        s = cf.small_omega_series(unit_state)
        assert s.c0 == pytest.approx(1.25, abs=1e-9)
        assert abs(s.c1) < 1e-7
        assert s.c2 == pytest.approx(21 / 8, abs=1e-6)
        assert s.normalized_c2 == pytest.approx(2.1, abs=1e-6)

    def test_ref8_series(self, unit_state):
        s = cf.small_omega_series(unit_state, "ref8")
        assert s.c0 == pytest.approx(1.25, abs=1e-12)
        assert s.normalized_c2 == pytest.approx(2.1, abs=1e-6)

    def test_claimed_coefficients(self, unit_state):
        # the 2.1 attributed to the literature formula is reproduced; the 1.6
        # claimed for the closed forms is not (they share the same expansion)
        ours = cf.small_omega_series(unit_state).normalized_c2
        theirs = cf.small_omega_series(unit_state, "ref8").normalized_c2
        assert round(theirs, 1) == 2.1
        assert round(ours, 1) != 1.6
        assert ours == pytest.approx(theirs, abs=1e-6)

    @pytest.mark.parametrize("g", [0.5, 2.0])
    def test_general_well_scaling(self, g):
        s = cf.small_omega_series(BoundState.from_g(g))
        # c2/c0 scales as 1/B^2 relative to the k0 = 1 value
        assert s.normalized_c2 * (2 * BoundState.from_g(g).B) ** 2 == pytest.approx(2.1, rel=1e-6)

    def test_non_convergent_schedule_reports(self, unit_state):
        with pytest.raises(EstimationError) as info:
            cf.small_omega_series(unit_state, steps=(0.2, 0.1, 0.05), tol=1e-12)
        assert "c2_last_change_normalized" in info.value.diagnostics

    def test_rejects_bad_schedule(self, unit_state):
        with pytest.raises(ValueError):
            cf.small_omega_series(unit_state, steps=(1e-2, 3e-3, 1e-3))
        with pytest.raises(ValueError):
            cf.small_omega_series(unit_state, evaluator="nope")


class TestDerived:
    def test_peak(self, unit_state):
        w, v = cf.locate_im_peak(unit_state)
        assert w / unit_state.B == pytest.approx(8 / 7, abs=1e-6)
        assert v == pytest.approx(IM_PEAK, rel=1e-12)

    @pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
    def test_f_sum(self, g):
        assert cf.f_sum_rule(BoundState.from_g(g)) == pytest.approx(math.pi / 2, abs=1e-9)

    @settings(max_examples=25, deadline=None)
    @given(x=st.floats(0.0, 0.999), g=st.floats(0.5, 2.0))
    def test_below_matches_mp(self, x, g):
        s = BoundState.from_g(g)
        assert cf.alpha_plus_below(s, x * s.B) == pytest.approx(float(mpo.alpha_plus_below(x * s.B, g)), rel=1e-13)
        assert cf.alpha_minus(s, x * s.B) == pytest.approx(float(mpo.alpha_minus(x * s.B, g)), rel=1e-13)
