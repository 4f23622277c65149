import math

import pytest

from sturmspec import (
    Word,
    band_samples,
    band_spectrum,
    intersect_intervals,
    interval_measure,
    measure_and_intersect,
    sturmian_transfer,
    trace_bound_scan,
    union_intervals,
    zero_lyapunov_check,
)
from sturmspec.errors import InvalidInputError, ResolutionError
from sturmspec.spectrum import _discriminant_at, _site_values


class TestBandSpectrum:
    def test_single_site_coupled(self):
        spec = band_spectrum(Word.from_text("1"), 1.0)
        assert spec.band_count == 1
        (lo, hi) = spec.bands[0]
        assert lo == pytest.approx(-1.0, abs=1e-10)
        assert hi == pytest.approx(3.0, abs=1e-10)
        assert spec.measure == pytest.approx(4.0, abs=1e-8)

    def test_word_ten_by_hand(self):
        # tr = E^2 - E - 2; |tr| = 2 at (1 -+ sqrt(17))/2, 0, 1
        spec = band_spectrum(Word.from_text("10"), 1.0)
        s17 = math.sqrt(17.0)
        assert spec.band_count == 2
        assert spec.bands[0][0] == pytest.approx((1 - s17) / 2, abs=1e-9)
        assert spec.bands[0][1] == pytest.approx(0.0, abs=1e-9)
        assert spec.bands[1][0] == pytest.approx(1.0, abs=1e-9)
        assert spec.bands[1][1] == pytest.approx((1 + s17) / 2, abs=1e-9)
        assert spec.measure == pytest.approx(s17 - 1, abs=1e-6)

    def test_free_word(self):
        spec = band_spectrum(Word.from_text("0"), 5.0)
        assert spec.bands[0][0] == pytest.approx(-2.0, abs=1e-10)
        assert spec.bands[0][1] == pytest.approx(2.0, abs=1e-10)

    def test_band_count_matches_period(self, golden_cf, fib_spectra):
        for level, spec in fib_spectra.items():
            assert spec.band_count == spec.period == golden_cf.q[level]

    def test_bands_inside_coupling_box(self, fib_spectra):
        for spec in fib_spectra.values():
            for lo, hi in spec.bands:
                assert -2 - abs(spec.coupling) <= lo <= hi <= 2 + abs(spec.coupling)

    def test_edges_hit_trace_two(self, golden_cf, fib_spectra):
        from sturmspec import standard_words

        values = _site_values(standard_words(golden_cf, 8).word(8), 1.0)
        for lo, hi in fib_spectra[8].bands:
            assert abs(abs(_discriminant_at(values, lo)) - 2.0) < 1e-8
            assert abs(abs(_discriminant_at(values, hi)) - 2.0) < 1e-8

    def test_touching_bands_raise(self):
        # "00" is the free chain labeled with period 2: its two bands meet at
        # E = 0 and can never be isolated
        with pytest.raises(ResolutionError):
            band_spectrum(Word.from_text("00"), 1.0)

    def test_empty_word_rejected(self):
        with pytest.raises(InvalidInputError):
            band_spectrum(Word(b"", 2), 1.0)


class TestIntervalArithmetic:
    def test_intersection_by_hand(self):
        spec_a = band_spectrum(Word.from_text("1"), 1.0)
        spec_b = band_spectrum(Word.from_text("10"), 1.0)
        rep = measure_and_intersect(spec_a, spec_b)
        # [-1, 3] meets [(1-s)/2, 0] u [1, (1+s)/2] in [-1, 0] u [1, (1+s)/2]
        s17 = math.sqrt(17.0)
        expected = 1.0 + (1 + s17) / 2 - 1.0
        assert rep.measure_intersection == pytest.approx(expected, abs=1e-8)
        assert rep.measure_intersection < min(rep.measure_a, rep.measure_b)

    def test_self_intersection(self, fib_spectra):
        spec = fib_spectra[5]
        rep = measure_and_intersect(spec, spec)
        assert rep.intersection == spec.bands
        assert rep.measure_intersection == pytest.approx(spec.measure, abs=1e-12)

    def test_coupling_mismatch(self):
        a = band_spectrum(Word.from_text("1"), 1.0)
        b = band_spectrum(Word.from_text("1"), 2.0)
        with pytest.raises(InvalidInputError):
            measure_and_intersect(a, b)

    def test_union_merges(self):
        u = union_intervals([(0.0, 1.0), (2.0, 3.0)], [(0.5, 2.5)])
        assert u == [(0.0, 3.0)]

    def test_disjoint_union_and_measure(self):
        u = union_intervals([(0.0, 1.0)], [(2.0, 2.5)])
        assert interval_measure(u) == pytest.approx(1.5)

    def test_intersect_touching_point(self):
        out = intersect_intervals([(0.0, 1.0)], [(1.0, 2.0)])
        assert out == [(1.0, 1.0)]
        assert interval_measure(out) == 0.0


class TestMonotoneProxy:
    def test_intersection_measures_non_increasing(self, fib_spectra):
        prev = None
        for n in range(1, 11):
            rep = measure_and_intersect(fib_spectra[n], fib_spectra[n + 1])
            if prev is not None:
                assert rep.measure_intersection <= prev + 1e-8
            prev = rep.measure_intersection

    def test_lambda_two_trend(self, golden_cf):
        from sturmspec import sturmian_band_spectrum

        specs = {n: sturmian_band_spectrum(golden_cf, 2.0, n) for n in range(1, 8)}
        prev = None
        for n in range(1, 7):
            rep = measure_and_intersect(specs[n], specs[n + 1])
            if prev is not None:
                assert rep.measure_intersection <= prev + 1e-8
            prev = rep.measure_intersection


class TestTraceBounds:
    def test_level_zero_traces_are_plain_energies(self, golden_cf):
        report = trace_bound_scan(golden_cf, 1.0, 4)
        # tr M(s_0)(E) = E, and proxy energies live inside the coupling box
        assert report.sup_per_level[0] <= 2 + 1.0

    def test_deep_levels_do_not_blow_up(self, golden_cf):
        report = trace_bound_scan(golden_cf, 1.0, 8)
        early = max(report.sup_per_level[1:5])
        late = max(report.sup_per_level[5:9])
        assert late < 1.5 * early

    def test_proxy_stability(self, golden_cf):
        r8 = trace_bound_scan(golden_cf, 1.0, 8, proxy_level=8)
        r9 = trace_bound_scan(golden_cf, 1.0, 8, proxy_level=9)
        assert abs(r9.overall_sup - r8.overall_sup) <= 0.2 * r8.overall_sup

    def test_matches_direct_trace_evaluation(self, golden_cf):
        report = trace_bound_scan(golden_cf, 1.0, 5, samples_per_band=1)
        k = 5
        direct = max(
            abs(sturmian_transfer(golden_cf, 1.0, e, k).trace())
            for e in report.sample_energies
        )
        assert report.sup_per_level[k] == pytest.approx(direct, rel=1e-12)

    def test_zero_coupling_rejected(self, golden_cf):
        with pytest.raises(InvalidInputError):
            trace_bound_scan(golden_cf, 0.0, 4)


class TestZeroLyapunov:
    def test_separation_at_modest_scale(self, golden_cf):
        report = zero_lyapunov_check(golden_cf, 1.0, 5, 5000)
        assert report.max_gamma_in_spectrum < report.min_gamma_gap_controls
        assert report.free_gamma == pytest.approx(0.0, abs=1e-12)

    def test_word_ten_gap_control(self):
        # the central gap of the two-band word "10": gamma at E = 0.5 is
        # (1/2) arccosh(|E^2 - E - 2| / 2) = 0.2493 for the periodic chain
        from sturmspec import forward_lyapunov_batch

        gamma = forward_lyapunov_batch([1.0, 0.0] * 50000, [0.5])[0]
        assert gamma >= 0.1
        assert gamma == pytest.approx(0.5 * math.acosh(2.25 / 2), abs=1e-3)

    def test_samples_cover_bands(self, fib_spectra):
        pts = band_samples(fib_spectra[3].bands, per_band=3)
        assert len(pts) == 9
        for (lo, hi), i in zip(fib_spectra[3].bands, range(0, 9, 3)):
            assert lo < pts[i] < pts[i + 1] < pts[i + 2] < hi
