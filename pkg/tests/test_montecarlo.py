"""Simulation engine tests: convergence, reproducibility, tests, oracle."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from statsmodels.stats.proportion import proportion_confint

from ebt.core import LengthMismatch, TrialSpec, analytic_psp, validate_trial
from ebt.montecarlo import (
    EmptySample,
    InvalidNull,
    binomial_test_greater,
    binomial_test_two_sided,
    brute_force_psp,
    ks_distance,
    partition_counts,
    simulate_trial,
    summarize,
    wilson_interval,
)
from ebt.pointer import normal
from ebt.rng import RandomStream

TABLE = validate_trial([(0.2, 0.3), (0.3, 0.5), (0.5, 0.7)])
TABLE_Y = [0.1, 0.9, 0.7]


class TestPartitioning:
    def test_counts(self):
        assert partition_counts(10, 4) == [4, 4, 2]
        assert partition_counts(8, 4) == [4, 4]
        assert partition_counts(1, 65536) == [1]

    def test_invalid(self):
        with pytest.raises(ValueError):
            partition_counts(0, 4)
        with pytest.raises(ValueError):
            partition_counts(10, 0)


class TestSimulateTrial:
    def test_table_convergence_at_one_million(self):
        result = simulate_trial(TABLE, TABLE_Y, 1_000_000, seed=0)
        sigma = math.sqrt(0.572 * 0.428 / 1_000_000)
        assert abs(result.empirical_psp - 0.572) < 3 * sigma

    def test_always_predict_success_estimates_p(self):
        result = simulate_trial(TABLE, [1.0, 1.0, 1.0], 400_000, seed=1)
        sigma = math.sqrt(0.56 * 0.44 / 400_000)
        assert abs(result.empirical_psp - 0.56) < 4 * sigma

    def test_single_trial(self):
        result = simulate_trial(TABLE, TABLE_Y, 1, seed=2)
        assert result.hits in (0, 1)
        assert result.n == 1 and result.partitions == 1

    def test_result_invariants(self):
        result = simulate_trial(TABLE, TABLE_Y, 12_345, seed=3, partition_size=1000)
        assert result.hits <= result.n
        assert result.empirical_psp == result.hits / result.n
        assert result.ci_low <= result.empirical_psp <= result.ci_high
        assert result.partitions == 13
        assert result.partition_size == 1000
        assert result.seed == 3

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            simulate_trial(TABLE, [0.1, 0.9], 10, seed=0)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            simulate_trial(TABLE, TABLE_Y, 0, seed=0)

    def test_bit_identical_across_worker_counts(self):
        runs = [
            simulate_trial(TABLE, TABLE_Y, 300_000, seed=9, partition_size=4096, workers=w)
            for w in (1, 2, 8)
        ]
        assert runs[0] == runs[1] == runs[2]

    def test_seed_changes_result(self):
        a = simulate_trial(TABLE, TABLE_Y, 100_000, seed=0)
        b = simulate_trial(TABLE, TABLE_Y, 100_000, seed=1)
        assert a.hits != b.hits

    def test_coverage_of_99ci_over_200_seeds(self):
        # 99% Wilson interval should cover the true PSP in >= 190 of 200 runs
        target = analytic_psp(TABLE, TABLE_Y)
        covered = sum(
            1
            for seed in range(200)
            if (result := simulate_trial(TABLE, TABLE_Y, 10_000, seed=seed)).ci_low
            <= target
            <= result.ci_high
        )
        assert covered >= 190

    def test_consistency_within_four_standard_errors(self):
        # |empirical - analytic| < 4 * SE in >= 199 of 200 seeds at n = 1e6
        target = analytic_psp(TABLE, TABLE_Y)
        good = 0
        for seed in range(200):
            result = simulate_trial(TABLE, TABLE_Y, 1_000_000, seed=seed)
            if abs(result.empirical_psp - target) < 4 * result.std_error:
                good += 1
        assert good >= 199


class TestBruteForceOracle:
    def test_table_value(self):
        assert brute_force_psp(TABLE, TABLE_Y) == pytest.approx(0.572, abs=1e-14)

    def test_single_fair_coin_is_half_for_any_y(self):
        trial = validate_trial([(1.0, 0.5)])
        for y in (0.0, 0.25, 0.5, 1.0):
            assert brute_force_psp(trial, [y]) == pytest.approx(0.5, abs=1e-15)

    def test_thousand_instances_match_analytic(self):
        stream = RandomStream(777)
        for _ in range(1000):
            n = 1 + int(stream.uniform() * 8)
            w = stream.uniform(n) + 1e-9
            trial = TrialSpec(w / w.sum(), stream.uniform(n))
            y = stream.uniform(n)
            assert abs(brute_force_psp(trial, y) - analytic_psp(trial, y)) <= 1e-14


class TestBinomialTestGreater:
    def test_all_hits_exact_tail(self):
        result = summarize(10, 10, seed=0, partitions=1, partition_size=10)
        verdict = binomial_test_greater(result, 0.3)
        assert verdict.p_value == pytest.approx(0.3**10, rel=1e-12)

    def test_null_center_large_n(self):
        n = 1_000_000
        result = summarize(int(0.56 * n), n, seed=0, partitions=1, partition_size=n)
        verdict = binomial_test_greater(result, 0.56)
        assert abs(verdict.p_value - 0.5) < 0.01

    def test_power_against_close_null(self):
        result = simulate_trial(TABLE, TABLE_Y, 1_000_000, seed=4)
        verdict = binomial_test_greater(result, 0.56)
        assert verdict.reject_at[0.001]

    def test_reject_map_consistent(self):
        result = summarize(60, 100, seed=0, partitions=1, partition_size=100)
        verdict = binomial_test_greater(result, 0.5)
        for alpha, flag in verdict.reject_at.items():
            assert flag == (verdict.p_value < alpha)

    def test_invalid_null(self):
        result = summarize(5, 10, seed=0, partitions=1, partition_size=10)
        for p0 in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(InvalidNull):
                binomial_test_greater(result, p0)

    def test_exact_matches_scipy_small_n(self):
        from scipy.stats import binomtest

        verdict = binomial_test_greater(
            summarize(621, 1000, seed=0, partitions=1, partition_size=1000), 0.6
        )
        reference = binomtest(621, 1000, 0.6, alternative="greater").pvalue
        assert verdict.p_value == pytest.approx(reference, rel=1e-9)


class TestBinomialTestTwoSided:
    def test_fair_counts_not_rejected(self):
        verdict = binomial_test_two_sided(500_412, 1_000_000, 0.5)
        assert not verdict.reject_at[0.01]

    def test_biased_counts_rejected(self):
        verdict = binomial_test_two_sided(513_000, 1_000_000, 0.5)
        assert verdict.reject_at[0.001]

    def test_matches_scipy_exact_small_n(self):
        from scipy.stats import binomtest

        verdict = binomial_test_two_sided(47, 120, 0.5)
        assert verdict.p_value == pytest.approx(binomtest(47, 120, 0.5).pvalue, rel=1e-9)


class TestWilsonInterval:
    @settings(max_examples=200)
    @given(st.integers(0, 1000), st.integers(1, 1000))
    def test_contains_the_point_estimate(self, hits, n):
        hits = min(hits, n)
        low, high = wilson_interval(hits, n)
        assert 0.0 <= low <= hits / n <= high <= 1.0

    def test_matches_statsmodels(self):
        for hits, n in [(0, 50), (17, 50), (50, 50), (999, 2000)]:
            low, high = wilson_interval(hits, n, confidence=0.99)
            ref_low, ref_high = proportion_confint(hits, n, alpha=0.01, method="wilson")
            assert low == pytest.approx(ref_low, abs=1e-12)
            assert high == pytest.approx(ref_high, abs=1e-12)

    def test_empty_sample(self):
        with pytest.raises(EmptySample):
            wilson_interval(0, 0)


class TestKsDistance:
    def test_single_sample_at_median(self):
        assert ks_distance([0.0], normal(0, 1)) == pytest.approx(0.5, abs=1e-15)

    def test_same_distribution_small_distance(self):
        draws = normal(0, 1).sample(RandomStream(8), 100_000)
        assert ks_distance(draws, normal(0, 1)) < 0.01

    def test_shifted_distribution_large_distance(self):
        draws = normal(0, 1).sample(RandomStream(9), 1000)
        assert ks_distance(draws, normal(10, 1)) > 0.9

    def test_empty_sample(self):
        with pytest.raises(EmptySample):
            ks_distance([], normal(0, 1))

    def test_matches_scipy_kstest(self):
        from scipy.stats import kstest

        draws = normal(0, 1).sample(RandomStream(10), 5000)
        ours = ks_distance(draws, normal(0, 1))
        reference = kstest(draws, "norm").statistic
        assert ours == pytest.approx(reference, abs=1e-12)
