"""Median predictor against a brute-force pmf oracle and a simulation median,
MSPE arithmetic, Hill estimator on exact and Pareto inputs."""

import numpy as np
import pytest
from scipy.stats import binom

from genspec.dists import (
    DiscreteStableParams,
    TailCapError,
    ds_pmf_atoms,
    sample_discrete_stable,
)
from genspec.forecast import (
    evaluate_mspe,
    hill_estimator,
    hill_sequence,
    median_predict_inar,
    predictions_inar,
    transition_pmf,
)

MEASLES_THETA = (0.560, 0.283, 0.364)  # (p, delta, alpha)


def brute_median(z_prev: int, p: float, delta: float, alpha: float, k_max: int = 8192) -> int:
    """Median from one oversized convolution, no adaptive support growth."""
    innov = ds_pmf_atoms(delta, alpha, k_max)
    if z_prev > 0 and p > 0:
        pmf = np.convolve(binom.pmf(np.arange(z_prev + 1), z_prev, p), innov)
    else:
        pmf = innov
    cdf = np.cumsum(pmf[: k_max + 1])
    assert cdf[-1] > 0.5 + 1e-6
    return int(np.searchsorted(cdf, 0.5, side="left"))


class TestMedianPredict:
    def test_zero_previous_count_is_innovation_median(self):
        p, delta, alpha = MEASLES_THETA
        assert median_predict_inar(0, p, delta, alpha) == brute_median(0, p, delta, alpha)

    def test_p_zero_ignores_previous_count(self):
        base = median_predict_inar(0, 0.0, 0.283, 0.364)
        for z_prev in (1, 7, 50):
            assert median_predict_inar(z_prev, 0.0, 0.283, 0.364) == base

    def test_matches_brute_force_convolution(self):
        cases = [
            (3, 0.560, 0.283, 0.364),
            (12, 0.9, 1.5, 0.7),
            (5, 0.25, 4.0, 0.5),
            (0, 0.5, 2.0, 1.0),
            (40, 0.95, 0.5, 0.9),
        ]
        for z_prev, p, delta, alpha in cases:
            assert median_predict_inar(z_prev, p, delta, alpha) == brute_median(
                z_prev, p, delta, alpha
            ), (z_prev, p, delta, alpha)

    def test_support_doubling_reaches_large_medians(self):
        # innovation median near 700 forces the 256-atom head to double
        assert median_predict_inar(0, 0.5, 10.0, 0.35) == brute_median(
            0, 0.5, 10.0, 0.35, k_max=16384
        )

    def test_matches_simulation_median(self):
        p, delta, alpha = MEASLES_THETA
        exact = median_predict_inar(3, p, delta, alpha)
        rng = np.random.default_rng(0)
        draws = rng.binomial(3, p, size=10**6) + sample_discrete_stable(
            DiscreteStableParams(delta, alpha), 10**6, rng
        )
        assert exact == int(np.quantile(draws, 0.5, method="inverted_cdf"))

    def test_nondecreasing_in_previous_count(self):
        for p, delta, alpha in [MEASLES_THETA, (0.3, 1.0, 1.0)]:
            meds = [median_predict_inar(z, p, delta, alpha) for z in range(13)]
            assert all(a <= b for a, b in zip(meds, meds[1:]))

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            median_predict_inar(-1, 0.5, 1.0, 0.7)
        with pytest.raises(ValueError):
            median_predict_inar(2.5, 0.5, 1.0, 0.7)
        with pytest.raises(ValueError):
            median_predict_inar(3, 1.5, 1.0, 0.7)
        with pytest.raises(ValueError):
            median_predict_inar(3, 0.5, -1.0, 0.7)
        with pytest.raises(ValueError):
            median_predict_inar(3, 0.5, 1.0, 1.3)


class TestTransitionPmf:
    def test_light_tail_mass_within_tolerance(self):
        # alpha = 1 innovations decay fast enough for a near-total pmf
        for z_prev, p, delta in [(3, 0.5, 1.0), (0, 0.0, 2.5), (10, 0.9, 0.3)]:
            pmf = transition_pmf(z_prev, p, delta, 1.0, tail_tolerance=1e-9)
            assert pmf.sum() == pytest.approx(1.0, abs=1e-8)

    def test_zero_previous_count_equals_innovation(self):
        pmf = transition_pmf(0, 0.7, 1.2, 1.0)
        innov = transition_pmf(5, 0.0, 1.2, 1.0)
        assert np.array_equal(pmf, innov)

    def test_heavy_tail_raises_tail_cap(self):
        p, delta, alpha = MEASLES_THETA
        with pytest.raises(TailCapError):
            transition_pmf(3, p, delta, alpha, hard_cap=4096)


class TestPredictionsAndMspe:
    def test_constant_series_with_degenerate_params(self):
        # p = 1 keeps every count, innovation median 0: perfect prediction
        assert evaluate_mspe([3, 3, 3, 3], 2, 1.0, 0.05, 0.7) == 0.0

    def test_single_test_point_arithmetic(self):
        # Bin(1, 1) + Poisson(1) has median 2, hitting the actual value
        assert evaluate_mspe([1, 2], 1, 1.0, 1.0, 1.0) == 0.0
        # innovation median drops to 0, prediction 1, squared error 1
        assert evaluate_mspe([1, 2], 1, 1.0, 0.1, 0.9) == 1.0

    def test_predictions_match_pointwise_medians(self):
        rng = np.random.default_rng(3)
        z = rng.poisson(4.0, size=60)
        p, delta, alpha = 0.4, 1.1, 0.8
        preds = predictions_inar(z, 45, p, delta, alpha)
        expected = [median_predict_inar(int(z[t - 1]), p, delta, alpha) for t in range(45, 60)]
        assert preds.tolist() == expected

    def test_split_bounds(self):
        with pytest.raises(ValueError):
            predictions_inar([1, 2, 3], 0, 0.5, 1.0, 0.7)
        with pytest.raises(ValueError):
            predictions_inar([1, 2, 3], 3, 0.5, 1.0, 0.7)

    def test_rejects_non_count_series(self):
        with pytest.raises(ValueError):
            evaluate_mspe([1.5, 2.0], 1, 0.5, 1.0, 0.7)
        with pytest.raises(ValueError):
            evaluate_mspe([-1, 2], 1, 0.5, 1.0, 0.7)


class TestHill:
    def test_exact_logarithms(self):
        x = [np.e**3, np.e**2, np.e, 1.0]
        assert hill_estimator(x, 3) == pytest.approx(2.0, rel=1e-12)

    def test_k_one_is_single_log_ratio(self):
        x = [5.0, 2.0, 1.0]
        assert hill_estimator(x, 1) == pytest.approx(np.log(5.0 / 2.0), rel=1e-12)

    def test_nonpositive_values_are_dropped(self):
        assert hill_estimator([-4.0, 0.0, np.e, 1.0], 1) == pytest.approx(1.0, rel=1e-12)

    def test_pareto_tail_index(self):
        rng = np.random.default_rng(5)
        x = 1.0 / rng.uniform(size=100_000)  # survival x^{-1}
        assert hill_estimator(x, 1000) == pytest.approx(1.0, abs=0.1)

    def test_sequence_agrees_with_scalar(self):
        rng = np.random.default_rng(8)
        x = 1.0 / rng.uniform(size=200) ** 2
        seq = hill_sequence(x)
        assert seq.size == 199
        for k in (1, 7, 50, 199):
            assert seq[k - 1] == pytest.approx(hill_estimator(x, k), rel=1e-12)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            hill_estimator([3.0, 2.0, 1.0], 3)
        with pytest.raises(ValueError):
            hill_estimator([3.0, 2.0, 1.0], 0)
        with pytest.raises(ValueError):
            hill_sequence([2.0, -1.0])
