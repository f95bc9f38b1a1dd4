"""Error propagation, scaling fits, calibration-curve estimation."""

import math

import numpy as np
import pytest

from compressed_metrology import dense, ising
from compressed_metrology.ising import IsingParams
from compressed_metrology.metrology import (
    cramer_rao,
    error_propagation,
    estimate_g,
    fit_power_law,
    fit_scaling,
    invert_expected_b,
    precision_b,
    precision_m,
    sequential_reference,
)


class TestErrorPropagation:
    def test_heisenberg_asymptote_arithmetic(self):
        # Var -> 1/4 and derivative -> -N/(4 pi) combine to 4 pi^2 / N^2.
        val = error_propagation(0.25, -100.0 / (4.0 * math.pi))
        assert val == pytest.approx(4.0 * math.pi**2 / 100.0**2, rel=1e-12)
        assert val == pytest.approx(3.947841760435743e-3, rel=1e-12)

    def test_trivial_cases(self):
        assert error_propagation(0.0, 2.0) == 0.0
        assert error_propagation(0.37, 1.0) == 0.37

    def test_zero_derivative(self):
        with pytest.raises(ValueError, match="identifiable"):
            error_propagation(0.5, 0.0)


class TestPrecisionPoints:
    def test_point_consistency(self):
        pt = precision_b(1.0, 16, shots=10)
        assert pt.delta_g_sq == pytest.approx(
            pt.variance / pt.derivative**2 / pt.shots, rel=1e-14
        )

    def test_shot_scaling_exact(self):
        single = precision_b(0.9, 64).delta_g_sq
        assert precision_b(0.9, 64, shots=100).delta_g_sq == single / 100.0
        assert precision_m(0.9, 64, shots=100).delta_g_sq == (
            precision_m(0.9, 64).delta_g_sq / 100.0
        )

    def test_heisenberg_band(self):
        # N^2-scaled uncertainty of the mode observable stays pinned near 4 pi^2.
        vals = [precision_b(1.0, n).delta_g_sq * n**2 for n in (32, 64, 256, 1024)]
        assert all(39.0 < v < 40.5 for v in vals)

    def test_magnetization_log_drift(self):
        # delta-g^2 * N log N for M drifts like 1/log N (the product with
        # log^2 N is what actually flattens); both behaviours are pinned here.
        vals = [precision_m(1.0, n).delta_g_sq * n * math.log(n) for n in (256, 1024, 8192)]
        assert vals[0] > vals[1] > vals[2]
        flat = [v * math.log(n) for v, n in zip(vals, (256, 1024, 8192))]
        assert max(flat) / min(flat) < 1.16


class TestFitScaling:
    def test_synthetic_power_law_exact(self):
        sizes = [8, 16, 32, 64, 128]
        fit = fit_power_law(sizes, [3.7 / n**2 for n in sizes])
        assert fit.slope == pytest.approx(-2.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_rescaling_invariance(self):
        sizes = [16, 64, 256, 1024]
        vals = [precision_b(1.0, n).delta_g_sq for n in sizes]
        base = fit_power_law(sizes, vals)
        scaled = fit_power_law(sizes, [100.0 * v for v in vals])
        assert scaled.slope == pytest.approx(base.slope, abs=1e-12)
        assert scaled.intercept == pytest.approx(base.intercept + math.log(100.0), abs=1e-12)

    def test_mode_observable_is_heisenberg(self):
        fit = fit_scaling("B", 1.0, [2**k for k in range(3, 11)])
        assert -2.1 <= fit.slope <= -1.9
        assert fit.r_squared > 0.999

    def test_magnetization_is_suboptimal(self):
        fit = fit_scaling("M", 1.0, [2**k for k in range(8, 14)])
        assert -1.35 <= fit.slope <= -1.0
        bmark = fit_scaling("B", 1.0, [2**k for k in range(8, 14)])
        assert fit.slope > bmark.slope  # strictly worse than the mode observable

    def test_degenerate_fits_rejected(self):
        with pytest.raises(ValueError):
            fit_scaling("B", 1.0, [64])
        with pytest.raises(ValueError):
            fit_scaling("B", 1.0, [64, 64])
        with pytest.raises(ValueError):
            fit_scaling("Z", 1.0, [8, 16])


class TestEstimateG:
    @pytest.mark.parametrize("n_spins", [16, 64])
    @pytest.mark.parametrize("g_star", [0.9, 1.0, 1.1])
    def test_exact_inversion(self, n_spins, g_star):
        g_hat, clamped = invert_expected_b(ising.expected_b(g_star, n_spins), n_spins)
        assert not clamped
        assert g_hat == pytest.approx(g_star, abs=1e-10)

    def test_estimate_from_samples(self):
        # mean -1/2 -> b_hat = 3/4, realizable with +-1 shots
        samples = np.array([1, -1, -1, -1])
        est = estimate_g(samples, 16, window=(0.0, 3.0))
        assert est.b_hat == 0.75
        assert ising.expected_b(est.g_hat, 16) == pytest.approx(0.75, abs=1e-10)
        assert est.shots == 4 and not est.clamped

    def test_clamping_flag(self):
        est = estimate_g(np.ones(8, dtype=int), 16, window=(0.9, 1.1))
        assert est.clamped and est.g_hat == 1.1  # mean +1 -> b_hat = 0, beyond window
        est = estimate_g(-np.ones(8, dtype=int), 16, window=(0.9, 1.1))
        assert est.clamped and est.g_hat == 0.9

    def test_input_validation(self):
        with pytest.raises(ValueError):
            estimate_g(np.array([]), 16)
        with pytest.raises(ValueError):
            estimate_g(np.array([1, 0, -1]), 16)
        with pytest.raises(ValueError):
            estimate_g(np.array([1, -1]), 16, window=(1.5, 0.5))

    def test_monte_carlo_matches_prediction(self):
        # Moment estimator from synthetic shots of the analytic distribution;
        # fixed seed keeps the run deterministic.
        n_spins, g_star, shots, reps = 64, 1.0, 10_000, 200
        rng = np.random.default_rng(321)
        p_plus = 0.5 * (1.0 + (1.0 - 2.0 * ising.expected_b(g_star, n_spins)))
        errors = []
        for _ in range(reps):
            mean = 2.0 * rng.binomial(shots, p_plus) / shots - 1.0
            g_hat, _ = invert_expected_b(0.5 * (1.0 - mean), n_spins)
            errors.append(g_hat - g_star)
        errors = np.asarray(errors)
        mse = float(np.mean(errors**2))
        predicted = precision_b(g_star, n_spins, shots).delta_g_sq
        assert predicted / 2.0 <= mse <= 2.0 * predicted
        # unbiased within 3 standard errors of the Monte-Carlo mean
        assert abs(errors.mean()) < 3.0 * errors.std() / math.sqrt(reps)

    def test_rmse_halves_with_quadruple_shots(self):
        n_spins, g_star, reps = 64, 1.0, 400
        rng = np.random.default_rng(77)
        p_plus = 0.5 * (1.0 + (1.0 - 2.0 * ising.expected_b(g_star, n_spins)))

        def rmse(shots):
            errs = []
            for _ in range(reps):
                mean = 2.0 * rng.binomial(shots, p_plus) / shots - 1.0
                g_hat, _ = invert_expected_b(0.5 * (1.0 - mean), n_spins)
                errs.append((g_hat - g_star) ** 2)
            return math.sqrt(np.mean(errs))

        ratio = rmse(2_000) / rmse(8_000)
        assert 1.7 < ratio < 2.3

    def test_plugin_standard_error(self):
        samples = np.array([1, -1, -1, -1])
        est = estimate_g(samples, 16, window=(0.0, 3.0))
        expected_se = math.sqrt(0.75 * 0.25 / 4) / abs(
            ising.expected_b_derivative(est.g_hat, 16)
        )
        assert est.std_error == pytest.approx(expected_se, rel=1e-12)


class TestBounds:
    def test_cramer_rao_arithmetic(self):
        assert cramer_rao(4.0) == 0.25
        assert cramer_rao(4.0, shots=100) == 0.25 / 100.0
        with pytest.raises(ValueError):
            cramer_rao(0.0)
        with pytest.raises(ValueError):
            cramer_rao(1.0, shots=0)

    def test_bound_against_dense_qfi(self):
        qfi = dense.qfi_pure(IsingParams(4, field_b=1.0, coupling_j=1.0))
        bound = cramer_rao(qfi)
        dg2 = precision_b(1.0, 4).delta_g_sq
        assert bound <= dg2 * (1.0 + 1e-9)
        assert bound == pytest.approx(dg2, rel=1e-6)  # saturated at the single pair

    def test_sequential_reference(self):
        both = sequential_reference(1.0, shots=1)
        assert both["nu_t_inverse_squared"] == 1.0 and both["per_shot_t_squared"] == 1.0
        assert sequential_reference(10.0)["nu_t_inverse_squared"] == pytest.approx(0.01)
        four = sequential_reference(10.0, shots=4)
        assert four["nu_t_inverse_squared"] == pytest.approx(1.0 / 1600.0)
        assert four["per_shot_t_squared"] == pytest.approx(1.0 / 400.0)
        with pytest.raises(ValueError):
            sequential_reference(0.0)
