import numpy as np
import pytest

from wavecoh import detrend_linear, mean_epoch, new_series, overlap, standardize
from wavecoh.errors import (
    EmptySeries,
    IncompatibleGrid,
    NoOverlap,
    NonFiniteValue,
    NonPositiveStep,
    TooShort,
    ZeroVariance,
)

from conftest import seeded_noise


class TestNewSeries:
    def test_millennial_span(self):
        s = new_series(850.0, 1.0, np.ones(1161), "TSI")
        assert s.t_end == 2010.0
        assert s.n == 1161

    def test_single_sample(self):
        s = new_series(0.0, 1.0, [1.0], "one")
        assert s.values.tolist() == [1.0]

    def test_zero_step_rejected(self):
        with pytest.raises(NonPositiveStep):
            new_series(0.0, 0.0, [1.0], "bad")

    def test_empty_rejected(self):
        with pytest.raises(EmptySeries):
            new_series(0.0, 1.0, [], "bad")

    def test_nonfinite_reports_index(self):
        with pytest.raises(NonFiniteValue) as err:
            new_series(0.0, 1.0, [1.0, np.nan, 2.0], "bad")
        assert err.value.index == 1

    def test_values_immutable(self):
        s = new_series(0.0, 1.0, [1.0, 2.0], "ro")
        with pytest.raises(ValueError):
            s.values[0] = 9.0


class TestMeanEpoch:
    @pytest.mark.parametrize(
        "t0,n,expected",
        [(800.0, 1211, 1405.0), (0.0, 3, 1.0), (850.0, 1161, 1430.0)],
    )
    def test_midpoints(self, t0, n, expected):
        assert mean_epoch(new_series(t0, 1.0, np.zeros(n), "")) == expected


class TestDetrendLinear:
    def test_exact_line_removed(self):
        out = detrend_linear(new_series(0.0, 1.0, [0.0, 1.0, 2.0, 3.0], ""))
        assert np.allclose(out.values, 0.0, atol=1e-14)

    def test_constant_removed(self):
        out = detrend_linear(new_series(0.0, 1.0, [5.0, 5.0, 5.0], ""))
        assert np.allclose(out.values, 0.0, atol=1e-14)

    def test_whole_period_sinusoid_unchanged(self):
        # A sinusoid even about the centered time axis has a null LS line;
        # verify that with an explicit normal-equation solve first.
        n = 240
        tau = (np.arange(n) - (n - 1) / 2.0) * 1.0
        y = np.cos(2.0 * np.pi * 3.0 * tau / n)
        gram = np.array([[n, tau.sum()], [tau.sum(), tau @ tau]])
        rhs = np.array([y.sum(), tau @ y])
        line = np.linalg.solve(gram, rhs)
        assert np.max(np.abs(line)) < 1e-14

        out = detrend_linear(new_series(0.0, 1.0, y, ""))
        assert np.max(np.abs(out.values - y)) < 1e-12 * np.max(np.abs(y))

    def test_too_short(self):
        with pytest.raises(TooShort):
            detrend_linear(new_series(0.0, 1.0, [1.0], ""))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_idempotent(self, seed):
        s = new_series(0.0, 0.5, seeded_noise(101, 11, seed) + 3.0, "")
        once = detrend_linear(s)
        twice = detrend_linear(once)
        scale = np.max(np.abs(once.values))
        assert np.max(np.abs(twice.values - once.values)) < 1e-12 * scale

    @pytest.mark.parametrize("seed", [3, 4])
    def test_zero_mean_zero_slope(self, seed):
        s = new_series(10.0, 2.0, seeded_noise(64, 12, seed) * 5 + 7, "")
        out = detrend_linear(s)
        tau = out.times - mean_epoch(out)
        assert abs(out.values.mean()) < 1e-12
        assert abs(tau @ out.values) / (tau @ tau) < 1e-12


class TestOverlap:
    def test_real_file_spans(self):
        tsi = new_series(850.0, 1.0, np.arange(1162.0), "TSI")  # 850..2011
        amo = new_series(800.0, 1.0, np.arange(1211.0), "AMO")  # 800..2010
        pair = overlap(amo, tsi)
        assert pair.a.t0 == pair.b.t0 == 850.0
        assert pair.a.n == pair.b.n == 1161
        assert pair.a.t_end == 2010.0
        # values trimmed consistently with their original time axes
        assert pair.a.values[0] == 50.0
        assert pair.b.values[0] == 0.0

    def test_identity(self):
        s = new_series(0.0, 1.0, seeded_noise(16, 13, 0), "s")
        pair = overlap(s, s)
        assert np.array_equal(pair.a.values, s.values)
        assert np.array_equal(pair.b.values, s.values)

    def test_disjoint(self):
        a = new_series(0.0, 1.0, np.zeros(11), "a")
        b = new_series(20.0, 1.0, np.zeros(11), "b")
        with pytest.raises(NoOverlap):
            overlap(a, b)

    def test_single_sample_intersection_rejected(self):
        a = new_series(0.0, 1.0, np.zeros(11), "a")
        b = new_series(10.0, 1.0, np.zeros(11), "b")
        with pytest.raises(NoOverlap):
            overlap(a, b)

    def test_dt_mismatch(self):
        a = new_series(0.0, 1.0, np.zeros(8), "a")
        b = new_series(0.0, 2.0, np.zeros(8), "b")
        with pytest.raises(IncompatibleGrid):
            overlap(a, b)

    def test_phase_mismatch(self):
        a = new_series(0.0, 1.0, np.zeros(8), "a")
        b = new_series(0.5, 1.0, np.zeros(8), "b")
        with pytest.raises(IncompatibleGrid):
            overlap(a, b)

    def test_phase_tolerance_absorbs_rounding(self):
        a = new_series(0.0, 1.0, np.arange(8.0), "a")
        b = new_series(2.0 + 1e-12, 1.0, np.arange(8.0), "b")
        pair = overlap(a, b)
        assert pair.a.n == 6

    def test_commutative_up_to_swap(self):
        a = new_series(0.0, 1.0, seeded_noise(30, 14, 0), "a")
        b = new_series(10.0, 1.0, seeded_noise(25, 14, 1), "b")
        ab = overlap(a, b)
        ba = overlap(b, a)
        assert np.array_equal(ab.a.values, ba.b.values)
        assert np.array_equal(ab.b.values, ba.a.values)


class TestStandardize:
    def test_two_point(self):
        out = standardize(new_series(0.0, 1.0, [1.0, 3.0], ""))
        assert np.allclose(out.values, [-np.sqrt(0.5), np.sqrt(0.5)], atol=1e-12)

    def test_idempotent(self):
        s = standardize(new_series(0.0, 1.0, seeded_noise(50, 15, 0) * 4 + 2, ""))
        again = standardize(s)
        assert np.max(np.abs(again.values - s.values)) < 1e-12

    def test_constant_rejected(self):
        with pytest.raises(ZeroVariance):
            standardize(new_series(0.0, 1.0, [2.0, 2.0, 2.0], ""))

    @pytest.mark.parametrize("seed", [5, 6, 7])
    def test_moments(self, seed):
        out = standardize(new_series(0.0, 1.0, seeded_noise(77, 16, seed) * 3 - 1, ""))
        assert abs(out.values.mean()) < 1e-12
        assert abs(np.var(out.values, ddof=1) - 1.0) < 1e-12
