import math

import numpy as np
import pytest

from arcpd import (
    DegenerateFitError,
    bic_select_order,
    conditional_loglik,
    fit_ar,
    levinson_durbin,
    mean_correct,
    sample_autocov,
)
from arcpd.ar import ARFit, AutocovSeq
from arcpd.simulate import ArmaSpec, PiecewiseSpec, simulate_piecewise


def toeplitz_solve(gamma, order):
    """Dense Yule-Walker oracle: solve -G b = g directly."""
    g = np.asarray(gamma, dtype=float)
    G = np.array([[g[abs(i - j)] for j in range(order)] for i in range(order)])
    coeffs = np.linalg.solve(G, -g[1 : order + 1])
    sigma2 = g[0] + g[1 : order + 1] @ coeffs
    return coeffs, sigma2


def random_ar_autocov(rng, order_hint=None):
    """Autocovariances of a random stationary AR process plus noise floor."""
    p = order_hint or rng.integers(1, 6)
    # partial autocorrelations in (-0.9, 0.9) guarantee stationarity
    pacf = rng.uniform(-0.9, 0.9, size=p)
    # build coefficients by the forward recursion
    phi = np.empty(0)
    for m, k in enumerate(pacf, start=1):
        new = np.empty(m)
        new[m - 1] = k
        new[: m - 1] = phi - k * phi[::-1]
        phi = new
    # run the process long enough to estimate sample autocovariances
    n = 2048
    e = rng.standard_normal(n + 200)
    x = np.zeros(n + 200)
    for t in range(n + 200):
        x[t] = e[t] + sum(phi[j] * x[t - j - 1] for j in range(p) if t - j - 1 >= 0)
    return sample_autocov(x[200:] - x[200:].mean(), 12)


class TestMeanCorrect:
    def test_example(self):
        assert np.allclose(mean_correct([1, 2, 3]), [-1, 0, 1])

    def test_constant(self):
        assert np.allclose(mean_correct([5, 5, 5]), [0, 0, 0])

    def test_already_centered(self):
        assert np.allclose(mean_correct([0.5, -0.5]), [0.5, -0.5])

    def test_sums_to_zero(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(-10, 10, size=101)
        assert abs(mean_correct(x).sum()) < 1e-9

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            mean_correct([])
        with pytest.raises(ValueError):
            mean_correct([1.0, math.nan])


class TestSampleAutocov:
    def test_alternating(self):
        acov = sample_autocov([1, -1, 1, -1], 1)
        assert np.allclose(acov.gamma, [1.0, -0.75])
        assert acov.sample_size == 4

    def test_zero_series(self):
        assert np.allclose(sample_autocov([0, 0, 0, 0], 2).gamma, 0.0)

    def test_impulse(self):
        assert np.allclose(sample_autocov([2, 0, 0, 0], 1).gamma, [1.0, 0.0])

    def test_matches_direct_summation(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal(40)
        acov = sample_autocov(x, 7)
        for j in range(8):
            direct = sum(x[t] * x[t - j] for t in range(j, 40)) / 40
            assert acov.gamma[j] == pytest.approx(direct, abs=1e-12)

    def test_max_lag_too_large(self):
        with pytest.raises(ValueError):
            sample_autocov([1.0, 2.0], 2)


class TestLevinsonDurbin:
    def test_order_one(self):
        fit = levinson_durbin(AutocovSeq(np.array([1.0, 0.5]), 10), 1)
        assert fit.coeffs == pytest.approx([-0.5])
        assert fit.sigma2 == pytest.approx(0.75)

    def test_white_noise(self):
        fit = levinson_durbin(AutocovSeq(np.array([2.5, 0.0, 0.0]), 10), 2)
        assert np.allclose(fit.coeffs, 0.0)
        assert fit.sigma2 == pytest.approx(2.5)

    def test_ar1_consistent_order_two(self):
        fit = levinson_durbin(AutocovSeq(np.array([1.0, 0.5, 0.25]), 10), 2)
        assert fit.coeffs == pytest.approx([-0.5, 0.0], abs=1e-12)
        assert fit.sigma2 == pytest.approx(0.75)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_dense_solve(self, seed):
        rng = np.random.default_rng(seed)
        acov = random_ar_autocov(rng)
        for order in (1, 3, 5, 8, 10):
            fit = levinson_durbin(acov, order)
            coeffs, sigma2 = toeplitz_solve(acov.gamma, order)
            assert np.allclose(fit.coeffs, coeffs, rtol=1e-8)
            assert fit.sigma2 == pytest.approx(sigma2, rel=1e-8)

    def test_residual_variance_monotone(self):
        rng = np.random.default_rng(77)
        acov = random_ar_autocov(rng)
        prev = acov.gamma[0]
        for order in range(1, 11):
            s2 = levinson_durbin(acov, order).sigma2
            assert s2 <= prev + 1e-12
            prev = s2

    def test_zero_gamma0_raises(self):
        with pytest.raises(DegenerateFitError):
            levinson_durbin(AutocovSeq(np.array([0.0, 0.0]), 4), 1)

    def test_breakdown_names_stage(self):
        # perfectly correlated: order-1 fit has zero residual variance
        acov = AutocovSeq(np.array([1.0, 1.0, 1.0]), 4)
        with pytest.raises(DegenerateFitError, match="order 2"):
            levinson_durbin(acov, 2)

    def test_short_autocov_rejected(self):
        with pytest.raises(ValueError):
            levinson_durbin(AutocovSeq(np.array([1.0, 0.3]), 4), 2)


class TestConditionalLoglik:
    def test_two_zeros_order_zero(self):
        fit = ARFit(order=0, coeffs=np.empty(0), sigma2=1.0)
        assert conditional_loglik([0.0, 0.0], fit) == pytest.approx(
            -math.log(2 * math.pi), abs=1e-12
        )

    def test_single_term_perfect_prediction(self):
        fit = ARFit(order=1, coeffs=np.array([-1.0]), sigma2=1.0)
        assert conditional_loglik([1.0, 1.0], fit) == pytest.approx(
            -0.5 * math.log(2 * math.pi), abs=1e-12
        )

    def test_one_point(self):
        fit = ARFit(order=0, coeffs=np.empty(0), sigma2=1.0)
        assert conditional_loglik([0.0], fit) == pytest.approx(
            -0.5 * math.log(2 * math.pi), abs=1e-12
        )

    def test_matches_direct_density_sum(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(30)
        fit = ARFit(order=2, coeffs=np.array([0.3, -0.2]), sigma2=1.7)
        direct = 0.0
        for t in range(2, 30):
            e = x[t] + 0.3 * x[t - 1] - 0.2 * x[t - 2]
            direct += -0.5 * (math.log(2 * math.pi * 1.7) + e * e / 1.7)
        assert conditional_loglik(x, fit) == pytest.approx(direct, abs=1e-10)

    def test_bad_sigma2(self):
        fit = ARFit(order=0, coeffs=np.empty(0), sigma2=0.0)
        with pytest.raises(ValueError):
            conditional_loglik([1.0, 2.0], fit)

    def test_too_short(self):
        fit = ARFit(order=3, coeffs=np.array([0.1, 0.1, 0.1]), sigma2=1.0)
        with pytest.raises(ValueError):
            conditional_loglik([1.0, 2.0, 3.0], fit)


class TestFitAr:
    def test_order_zero_is_mean_square(self):
        rng = np.random.default_rng(9)
        x = mean_correct(rng.standard_normal(64))
        fit = fit_ar(x, 0)
        assert fit.coeffs.size == 0
        assert fit.sigma2 == pytest.approx(np.mean(x**2))

    def test_composition_identity(self):
        rng = np.random.default_rng(10)
        x = mean_correct(rng.standard_normal(128))
        fit = fit_ar(x, 3)
        direct = levinson_durbin(sample_autocov(x, 3), 3)
        assert np.array_equal(fit.coeffs, direct.coeffs)
        assert fit.sigma2 == direct.sigma2

    def test_recovers_ar1_coefficient(self):
        # generated with x[t] = 0.7 x[t-1] + e[t]; whitening sign flips it
        spec = PiecewiseSpec(((ArmaSpec(ar=(0.7,)), 4096),))
        x = simulate_piecewise(spec, 0)
        fit = fit_ar(mean_correct(x), 1)
        assert abs(fit.coeffs[0] - (-0.7)) < 0.05

    def test_order_zero_loglik_closed_form(self):
        rng = np.random.default_rng(21)
        x = mean_correct(rng.standard_normal(200))
        fit = fit_ar(x, 0)
        n = len(x)
        expected = -0.5 * n * (math.log(2 * math.pi * fit.sigma2) + 1.0)
        assert fit.loglik == pytest.approx(expected, abs=1e-10)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(30)
        x = mean_correct(rng.standard_normal(256))
        base = fit_ar(x, 4)
        scaled = fit_ar(7.5 * x, 4)
        assert np.allclose(base.coeffs, scaled.coeffs, atol=1e-10)
        assert scaled.sigma2 == pytest.approx(7.5**2 * base.sigma2, rel=1e-10)


class TestBicSelectOrder:
    def test_white_noise_picks_zero(self):
        x = simulate_piecewise(PiecewiseSpec(((ArmaSpec(), 1024),)), 0)
        assert bic_select_order(mean_correct(x), 10) == 0

    def test_ar2_picks_two(self):
        spec = PiecewiseSpec(((ArmaSpec(ar=(1.69, -0.81)), 2048),))
        x = simulate_piecewise(spec, 0)
        assert bic_select_order(mean_correct(x), 10) == 2

    def test_short_series_is_legal(self):
        got = bic_select_order([0.3, -1.2, 0.7, 0.1, -0.4], 3)
        assert got in (0, 1, 2, 3)

    def test_max_order_must_fit(self):
        with pytest.raises(ValueError):
            bic_select_order([1.0, 2.0, 3.0], 3)
