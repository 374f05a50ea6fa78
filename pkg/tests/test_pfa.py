import numpy as np
import pytest

from wavecoh import (
    BandSpec,
    band_component,
    band_correlation,
    band_periods,
    evaluate_pfa,
    fit_pfa,
    new_series,
)
from wavecoh.errors import (
    BandOutOfRange,
    LengthMismatch,
    SingularNormalMatrix,
    Underdetermined,
    ZeroVariance,
)

from conftest import seeded_noise


def normal_equation_fit(y, tau, p0, n):
    """Independent reference solve: explicit normal equations.

    Deliberately uses a different construction and solver than the
    package (explicit Gram matrix inverse, not an SVD).
    """
    cols = [np.ones_like(tau), tau]
    for k in range(1, n + 1):
        w = 2.0 * np.pi * k / p0
        cols.append(np.sin(w * tau))
        cols.append(np.cos(w * tau))
    a = np.column_stack(cols)
    return np.linalg.solve(a.T @ a, a.T @ y)


def centered_tau(n, dt=1.0):
    return (np.arange(n) - (n - 1) / 2.0) * dt


class TestFitPfa:
    def test_single_harmonic_recovery(self):
        n_samp, p0 = 200, 200.0
        tau = centered_tau(n_samp)
        y = 3.0 * np.sin(2.0 * np.pi * 4.0 * tau / p0)
        model = fit_pfa(new_series(0.0, 1.0, y, ""), p0=p0, n=10)
        assert abs(model.coeffs[3, 0] - 3.0) < 1e-8
        others = np.concatenate(
            [np.delete(model.coeffs[:, 0], 3), model.coeffs[:, 1], [model.f0, model.f1]]
        )
        assert np.max(np.abs(others)) < 1e-8
        # cross-check the whole coefficient vector against the reference solve
        ref = normal_equation_fit(y, tau, p0, 10)
        got = np.concatenate([[model.f0, model.f1], model.coeffs.reshape(-1)])
        want = np.concatenate([ref[:2], ref[2:]])
        assert np.max(np.abs(got - want)) < 1e-8

    def test_constant_series(self):
        model = fit_pfa(new_series(0.0, 1.0, np.full(50, 7.25), ""), p0=50.0, n=5)
        assert abs(model.f0 - 7.25) < 1e-10
        assert np.max(np.abs(model.coeffs)) < 1e-10
        assert abs(model.f1) < 1e-10

    def test_dft_equivalence_on_one_period_grid(self):
        # Band-limited input with an exactly null LS line (the two sine
        # amplitudes balance the discrete slope coupling), so the input is
        # its own detrend and LS coefficients must equal the projections.
        n_samp, p0 = 200, 200.0
        tau = centered_tau(n_samp)
        a2 = 1.0
        a3 = a2 * np.sin(3 * np.pi / n_samp) / np.sin(2 * np.pi / n_samp)
        y = (
            a2 * np.sin(2 * np.pi * 2 * tau / p0)
            + a3 * np.sin(2 * np.pi * 3 * tau / p0)
            + 0.8 * np.cos(2 * np.pi * 5 * tau / p0)
            - 0.6 * np.cos(2 * np.pi * 8 * tau / p0)
        )
        model = fit_pfa(new_series(0.0, 1.0, y, ""), p0=p0, n=10)
        k = np.arange(1, 11)
        args = np.outer(tau, 2 * np.pi * k / p0)
        dft_a = 2.0 / n_samp * (y @ np.sin(args))
        dft_b = 2.0 / n_samp * (y @ np.cos(args))
        assert np.max(np.abs(model.coeffs[:, 0] - dft_a)) < 1e-8
        assert np.max(np.abs(model.coeffs[:, 1] - dft_b)) < 1e-8

    def test_default_p0_is_span(self):
        s = new_series(0.0, 1.0, seeded_noise(64, 21, 0), "")
        assert fit_pfa(s, n=4).p0 == 64.0

    def test_underdetermined(self):
        with pytest.raises(Underdetermined):
            fit_pfa(new_series(0.0, 1.0, np.zeros(10) + seeded_noise(10, 21, 1), ""), p0=10.0, n=5)

    def test_singular_matrix_reported(self):
        # Harmonic 2 of P0 = 2*dt sits exactly on the sampling frequency,
        # so its sine column vanishes on the grid.
        y = seeded_noise(10, 21, 2)
        with pytest.raises(SingularNormalMatrix):
            fit_pfa(new_series(0.0, 1.0, y, ""), p0=2.0, n=2)

    def test_residuals_orthogonal_to_basis(self):
        n_samp, p0, n = 120, 97.0, 8
        y = seeded_noise(n_samp, 21, 3)
        s = new_series(0.0, 1.0, y, "")
        model = fit_pfa(s, p0=p0, n=n)
        resid = y - evaluate_pfa(model, s.times)
        tau = centered_tau(n_samp)
        cols = [np.ones(n_samp), tau]
        for k in range(1, n + 1):
            w = 2 * np.pi * k / p0
            cols.extend([np.sin(w * tau), np.cos(w * tau)])
        for col in cols:
            assert abs(col @ resid) < 1e-8 * np.linalg.norm(col) * np.linalg.norm(resid + 1e-30)

    def test_sigma_nonnegative_and_shrinks(self):
        # Same process, 4x the samples over more base periods: errors
        # should drop roughly like 1/sqrt(N) (factor-2 slack on factor 2).
        p0 = 64.0
        for n_samp in (256, 1024):
            tau = centered_tau(n_samp)
            y = np.sin(2 * np.pi * 3 * tau / p0) + 0.5 * seeded_noise(n_samp, 21, 4)
            model = fit_pfa(new_series(0.0, 1.0, y, ""), p0=p0, n=4)
            assert np.all(model.sigma >= 0)
            if n_samp == 256:
                small = model.sigma.mean()
            else:
                big = model.sigma.mean()
        ratio = small / big
        assert 1.0 < ratio < 4.0


class TestEvaluate:
    def test_constant_model(self):
        model = fit_pfa(new_series(0.0, 1.0, np.full(20, 2.0), ""), p0=20.0, n=2)
        out = evaluate_pfa(model, [0.0, 3.5, 19.0])
        assert np.allclose(out, 2.0, atol=1e-10)

    def test_pure_trend(self):
        model = fit_pfa(new_series(0.0, 1.0, centered_tau(20) + 4.0, ""), p0=20.0, n=2)
        # f0 + f1*(t - t0) with f0 = 4, f1 = 1: five years past the mean epoch
        assert abs(evaluate_pfa(model, [model.t0 + 5.0])[0] - 9.0) < 1e-9

    def test_ls_beats_single_harmonic_grid_search(self):
        n_samp, p0 = 128, 128.0
        y = seeded_noise(n_samp, 22, 0)
        s = new_series(0.0, 1.0, y, "")
        model = fit_pfa(s, p0=p0, n=6)
        full_rms = np.sqrt(np.mean((y - evaluate_pfa(model, s.times)) ** 2))
        tau = centered_tau(n_samp)
        best = np.inf
        for k in range(1, 7):
            basis = np.sin(2 * np.pi * k * tau / p0)
            for amp in np.linspace(-2, 2, 81):
                best = min(best, np.sqrt(np.mean((y - amp * basis) ** 2)))
        assert full_rms <= best + 1e-12


class TestBands:
    def fixture_model(self):
        n_samp, p0 = 200, 200.0
        tau = centered_tau(n_samp)
        y = 3.0 * np.sin(2 * np.pi * 4 * tau / p0) + 1.1 * np.cos(2 * np.pi * 7 * tau / p0)
        return fit_pfa(new_series(0.0, 1.0, y, ""), p0=p0, n=10), tau, y

    def test_full_band_plus_trend_is_complete(self):
        model, tau, y = self.fixture_model()
        times = tau + model.t0
        total = band_component(model, BandSpec(1, model.n), times)
        trend = model.f0 + model.f1 * (times - model.t0)
        assert np.max(np.abs(total + trend - evaluate_pfa(model, times))) < 1e-12

    def test_single_band_recovers_harmonic(self):
        model, tau, _ = self.fixture_model()
        out = band_component(model, BandSpec(4, 4), tau + model.t0)
        want = 3.0 * np.sin(2 * np.pi * 4 * tau / model.p0)
        assert np.max(np.abs(out - want)) < 1e-7

    def test_disjoint_bands_sum(self):
        model, tau, _ = self.fixture_model()
        times = tau + model.t0
        lo = band_component(model, BandSpec(2, 5), times)
        hi = band_component(model, BandSpec(6, 9), times)
        both = band_component(model, BandSpec(2, 9), times)
        assert np.array_equal(lo + hi, both) or np.max(np.abs(lo + hi - both)) < 1e-14

    def test_band_out_of_range(self):
        model, tau, _ = self.fixture_model()
        with pytest.raises(BandOutOfRange):
            band_component(model, BandSpec(9, 11), tau)
        with pytest.raises(BandOutOfRange):
            BandSpec(0, 3)

    def millennial_model(self):
        y = seeded_noise(1164, 24, 0)
        return fit_pfa(new_series(0.0, 1.0, y, ""), p0=1164.0, n=30)

    def test_band_periods_centennial_row(self):
        lo, hi = band_periods(self.millennial_model(), BandSpec(5, 6))
        assert (lo, hi) == (194.0, 232.8)
        # containment in the published centennial interval
        assert 193.2 <= lo and hi <= 232.8

    def test_band_periods_trivial_and_decadal(self):
        model, _, _ = self.fixture_model()
        assert band_periods(model, BandSpec(1, 1)) == (model.p0, model.p0)
        lo, hi = band_periods(self.millennial_model(), BandSpec(24, 24))
        assert lo == hi == 48.5
        # inside the published decadal interval 48.3..54.4
        assert 48.3 <= lo <= 54.4


class TestBandCorrelation:
    def test_identical(self):
        x = seeded_noise(40, 23, 0)
        assert band_correlation(x, x) == 1.0

    def test_negated(self):
        x = seeded_noise(40, 23, 1)
        assert band_correlation(x, -x) == -1.0

    def test_sin_cos_orthogonal(self):
        n = 360
        i = np.arange(n)
        s = np.sin(2 * np.pi * i / n)
        c = np.cos(2 * np.pi * i / n)
        # direct-summation oracle for the orthogonality claim
        assert abs(np.sum(s * c)) < 1e-10
        assert abs(band_correlation(s, c)) < 1e-10

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            band_correlation([1.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(LengthMismatch):
            band_correlation([1.0, 2.0], [1.0, 2.0])

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            band_correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
