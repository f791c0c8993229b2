"""Scenario tests: closed forms, compilation equivalence, physical simulation."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ebt.core import analytic_psp, success_probability
from ebt.montecarlo import simulate_trial
from ebt.pointer import cauchy, exponential, logistic, normal
from ebt.rng import RandomStream
from ebt.scenarios import (
    CoinBagScenario,
    DegenerateRealization,
    EnvelopeScenario,
    InvalidScenario,
    RailroadScenario,
    UniformParameters,
    WilloughbyScenario,
    coin_bag_contrast,
    coin_bag_psp,
    coin_bag_to_trial,
    envelope_psp,
    envelope_to_trial,
    railroad_psp,
    railroad_to_trial,
    realize_parameters,
    simulate_physical,
    willoughby_psp,
    willoughby_timing_sequences,
    willoughby_to_trial,
)

THIRD = 1.0 / 3.0


def _random_pointer(stream):
    families = (
        lambda loc, scale: normal(loc, scale),
        lambda loc, scale: cauchy(loc, scale),
        lambda loc, scale: logistic(loc, scale),
    )
    pick = int(stream.uniform() * 3) % 3
    return families[pick](4.0 * (stream.uniform() - 0.5), 0.2 + 2.0 * stream.uniform())


class TestEnvelope:
    def test_validation(self):
        with pytest.raises(InvalidScenario):
            EnvelopeScenario(small_amount=3.0, large_amount=2.0)
        with pytest.raises(InvalidScenario):
            EnvelopeScenario(small_amount=0.0, large_amount=2.0)

    def test_median_small_amount(self):
        # p = 1/2 at the exponential median, q = e^{-20}: PSP ~ 0.75
        sc = EnvelopeScenario(math.log(2.0), 20.0, pointer=exponential(1.0))
        expected = 1.0 - 0.5 * (0.5 + math.exp(-20.0))
        assert envelope_psp(sc) == pytest.approx(expected, abs=1e-12)
        assert envelope_psp(sc) == pytest.approx(0.75, abs=1e-8)

    def test_pointer_concentrated_between_amounts(self):
        sc = EnvelopeScenario(5.0, 15.0, pointer=normal(10.0, 0.1))
        assert envelope_psp(sc) > 1.0 - 1e-6

    def test_always_better_than_half(self):
        stream = RandomStream(12)
        for _ in range(100):
            s = 0.1 + 5.0 * stream.uniform()
            sc = EnvelopeScenario(s, s + 0.01 + 5.0 * stream.uniform(),
                                  pointer=exponential(0.2 + 2 * stream.uniform()))
            assert envelope_psp(sc) > 0.5

    def test_compiles_to_equivalent_trial(self):
        stream = RandomStream(13)
        for _ in range(100):
            s = 0.1 + 5.0 * stream.uniform()
            sc = EnvelopeScenario(s, s + 0.01 + 5.0 * stream.uniform(),
                                  pointer=exponential(0.2 + 2 * stream.uniform()))
            trial, strategy = envelope_to_trial(sc)
            assert success_probability(trial) == pytest.approx(0.5, abs=1e-15)
            assert analytic_psp(trial, strategy) == pytest.approx(
                envelope_psp(sc), abs=1e-12
            )

    def test_physical_simulation_converges(self):
        sc = EnvelopeScenario(math.log(2.0), 2.0, pointer=exponential(1.0))
        target = envelope_psp(sc)
        result = simulate_physical(sc, 200_000, seed=21)
        sigma = math.sqrt(target * (1 - target) / result.n)
        assert abs(result.empirical_psp - target) < 4 * sigma


class TestRailroad:
    def _scenario(self, r=0.75, tail=0.1):
        edge = float(cauchy(0.0, 1.0).ppf(1.0 - tail))
        return RailroadScenario(-edge, edge, r, pointer=cauchy(0.0, 1.0))

    def test_validation(self):
        with pytest.raises(InvalidScenario):
            RailroadScenario(1.0, -1.0, 0.75)
        for bad_r in (0.5, 1.0, 0.3):
            with pytest.raises(InvalidScenario):
                RailroadScenario(-1.0, 1.0, bad_r)

    def test_formula_value(self):
        sc = self._scenario()
        assert railroad_psp(sc) == pytest.approx(0.70, abs=1e-12)

    def test_limit_small_tails(self):
        sc = RailroadScenario(-1e7, 1e7, 0.75, pointer=normal(0, 1))
        assert railroad_psp(sc) == pytest.approx(0.75, abs=1e-9)

    def test_limit_fair_spinner(self):
        sc = self._scenario(r=0.5 + 1e-9)
        assert railroad_psp(sc) == pytest.approx(0.5, abs=1e-8)

    def test_compiled_trial_shape(self):
        trial, strategy = railroad_to_trial(self._scenario())
        assert trial.outcomes() == [(0.5, 0.75), (0.5, 0.25)]
        # predict-east probabilities from each station: (1 - p, q)
        assert strategy.y[0] == pytest.approx(0.9, abs=1e-12)
        assert strategy.y[1] == pytest.approx(0.1, abs=1e-12)
        assert analytic_psp(trial, strategy) == pytest.approx(0.70, abs=1e-12)

    def test_compilation_equivalence_100_parameterizations(self):
        stream = RandomStream(14)
        for _ in range(100):
            a, b = np.sort(4.0 * (stream.uniform(2) - 0.5))
            sc = RailroadScenario(
                float(a), float(b) + 0.01, 0.5 + 1e-6 + 0.5 * 0.999 * stream.uniform(),
                pointer=_random_pointer(stream),
            )
            trial, strategy = railroad_to_trial(sc)
            assert analytic_psp(trial, strategy) == pytest.approx(
                railroad_psp(sc), abs=1e-12
            )
            assert railroad_psp(sc) > 0.5

    def test_physical_simulation_converges(self):
        sc = self._scenario()
        result = simulate_physical(sc, 400_000, seed=22)
        sigma = math.sqrt(0.7 * 0.3 / result.n)
        assert abs(result.empirical_psp - 0.70) < 4 * sigma

    def test_physical_matches_abstract_engine(self):
        # the compiled pair drives the abstract engine to the same target
        sc = self._scenario()
        trial, strategy = railroad_to_trial(sc)
        abstract = simulate_trial(trial, strategy, 400_000, seed=23)
        sigma = math.sqrt(0.7 * 0.3 / abstract.n)
        assert abs(abstract.empirical_psp - railroad_psp(sc)) < 4 * sigma


class TestWilloughby:
    def test_validation(self):
        with pytest.raises(InvalidScenario):
            WilloughbyScenario(0.0, -1.0, 1.0)

    def test_symmetric_cauchy_value(self):
        sc = WilloughbyScenario(-1.0, 0.0, 1.0, pointer=cauchy(0.0, 1.0))
        assert willoughby_psp(sc) == pytest.approx(0.75, abs=1e-12)

    def test_distant_flanks_approach_certainty(self):
        sc = WilloughbyScenario(-1e8, 0.0, 1e8, pointer=normal(0, 1))
        assert willoughby_psp(sc) == pytest.approx(1.0, abs=1e-9)

    def test_pointer_outside_flanks_approaches_half(self):
        sc = WilloughbyScenario(-0.001, 0.0, 0.001, pointer=cauchy(0.0, 1000.0))
        assert willoughby_psp(sc) == pytest.approx(0.5, abs=1e-5)

    def test_compilation_equivalence_100_parameterizations(self):
        stream = RandomStream(15)
        for _ in range(100):
            west, mid, east = np.sort(6.0 * (stream.uniform(3) - 0.5))
            if west == mid or mid == east:
                continue
            sc = WilloughbyScenario(float(west), float(mid), float(east),
                                    pointer=_random_pointer(stream))
            trial, strategy = willoughby_to_trial(sc)
            assert analytic_psp(trial, strategy) == pytest.approx(
                willoughby_psp(sc), abs=1e-12
            )
            assert willoughby_psp(sc) > 0.5

    def test_physical_simulation_converges(self):
        sc = WilloughbyScenario(-1.0, 0.0, 1.0, pointer=cauchy(0.0, 1.0))
        result = simulate_physical(sc, 400_000, seed=24)
        sigma = math.sqrt(0.75 * 0.25 / result.n)
        assert abs(result.empirical_psp - 0.75) < 4 * sigma

    def test_timing_sequences_identical(self):
        sc = WilloughbyScenario(-1.0, 0.0, 1.0, pointer=cauchy(0.0, 1.0))
        before, after, went_east = willoughby_timing_sequences(sc, 100_000, seed=25)
        assert np.array_equal(before, after)
        hits_before = int(np.count_nonzero(before == went_east))
        hits_after = int(np.count_nonzero(after == went_east))
        assert hits_before == hits_after
        assert abs(hits_before / 100_000 - 0.75) < 4 * math.sqrt(0.75 * 0.25 / 100_000)


class TestCoinBag:
    def _scenario(self, **kwargs):
        return CoinBagScenario(s1=THIRD, s2=2 * THIRD, **kwargs)

    def test_validation(self):
        with pytest.raises(InvalidScenario):
            CoinBagScenario(s1=0.6, s2=0.4)
        with pytest.raises(InvalidScenario):
            CoinBagScenario(s1=0.3, s2=0.6)  # does not sum to 1
        with pytest.raises(InvalidScenario):
            CoinBagScenario(s1=THIRD, s2=2 * THIRD, model="weight")
        with pytest.raises(InvalidScenario):
            UniformParameters(1.0, 0.0)

    def test_compiled_example_value(self):
        # realization chosen so the predict-heads probabilities are (0.3, 0.7)
        sc = self._scenario()
        c1 = float(sc.pointer.ppf(0.7))
        c2 = float(sc.pointer.ppf(0.3))
        trial, strategy = coin_bag_to_trial(sc, (c1, c2))
        assert strategy.y[0] == pytest.approx(0.3, abs=1e-12)
        assert strategy.y[1] == pytest.approx(0.7, abs=1e-12)
        expected = 0.5 + (0.7 - 0.3) * (2 * THIRD - 0.5)
        assert analytic_psp(trial, strategy) == pytest.approx(expected, abs=1e-12)
        assert coin_bag_psp(sc, (c1, c2)) == pytest.approx(expected, abs=1e-12)

    def test_uniform_y_boundary_value(self):
        # hypothetical equal pointer-exceedance gives PSP exactly 1/2
        sc = self._scenario()
        trial = coin_bag_to_trial(sc, (1.0, 0.0))[0]
        assert analytic_psp(trial, [0.4, 0.4]) == pytest.approx(0.5, abs=1e-12)

    def test_perfect_discrimination(self):
        sc = self._scenario()
        trial = coin_bag_to_trial(sc, (1.0, 0.0))[0]
        assert analytic_psp(trial, [0.0, 1.0]) == pytest.approx(sc.s2, abs=1e-12)

    def test_degenerate_realization_guarded(self):
        with pytest.raises(DegenerateRealization):
            coin_bag_to_trial(self._scenario(), (0.4, 0.4))

    def test_misordered_realization_rejected(self):
        with pytest.raises(InvalidScenario):
            coin_bag_to_trial(self._scenario(), (0.2, 0.8))

    def test_realizations_keep_coin2_smaller(self):
        sc = self._scenario()
        stream = RandomStream(16)
        for _ in range(1000):
            c1, c2 = realize_parameters(sc, stream)
            assert c2 < c1

    def test_compilation_beats_chance_100_parameterizations(self):
        sc = self._scenario()
        stream = RandomStream(17)
        for _ in range(100):
            realization = realize_parameters(sc, stream)
            trial, strategy = coin_bag_to_trial(sc, realization)
            assert strategy.y[1] > strategy.y[0]
            psp = analytic_psp(trial, strategy)
            assert psp > 0.5
            # symmetric closed form for p = 1/2, s1 + s2 = 1
            expected = 0.5 + (strategy.y[1] - strategy.y[0]) * (sc.s2 - 0.5)
            assert psp == pytest.approx(expected, abs=1e-12)

    def _expected_physical_psp(self, sc):
        # quadrature oracle: E[PSP] = 1/2 + (s2 - 1/2) * E[F(max) - F(min)]
        # for two iid uniform(low, high) parameters
        low, high = sc.parameter_sampler.low, sc.parameter_sampler.high
        span = high - low

        def integrand(x):
            u = (x - low) / span
            return sc.pointer.cdf(x) * (4.0 * u - 2.0) / span

        gap, _ = quad(integrand, low, high)
        return 0.5 + (sc.s2 - 0.5) * gap

    def test_physical_simulation_converges_to_quadrature(self):
        sc = self._scenario()
        target = self._expected_physical_psp(sc)
        result = simulate_physical(sc, 400_000, seed=26)
        sigma = math.sqrt(target * (1 - target) / result.n)
        assert abs(result.empirical_psp - target) < 4 * sigma

    def test_model_tag_does_not_change_the_math(self):
        results = [
            simulate_physical(self._scenario(model=model), 50_000, seed=27)
            for model in ("position", "mass", "time")
        ]
        assert results[0] == results[1] == results[2]

    def test_contrast_fair_flips_predictable_outcomes(self):
        sc = self._scenario()
        contrast = coin_bag_contrast(sc, 200_000, seed=28)
        # marginal heads frequency is exactly 1/2: fairness retained
        assert not contrast.fairness_test.reject_at[0.01]
        # the same run's prediction hit rate is far above 1/2
        assert contrast.prediction_test.reject_at[0.001]
        assert contrast.prediction.empirical_psp > 0.5
        assert (
            abs(contrast.heads_frequency - 0.5)
            < 4 * math.sqrt(0.25 / contrast.prediction.n)
        )


class TestPhysicalReproducibility:
    @pytest.mark.parametrize(
        "sc",
        [
            EnvelopeScenario(1.0, 2.0),
            RailroadScenario(-2.0, 2.0, 0.75),
            WilloughbyScenario(-1.0, 0.0, 1.0),
            CoinBagScenario(s1=THIRD, s2=2 * THIRD),
        ],
        ids=["envelope", "railroad", "willoughby", "coin_bag"],
    )
    def test_worker_counts_agree(self, sc):
        runs = [
            simulate_physical(sc, 150_000, seed=29, partition_size=8192, workers=w)
            for w in (1, 2, 8)
        ]
        assert runs[0] == runs[1] == runs[2]

    def test_single_physical_trial(self):
        result = simulate_physical(EnvelopeScenario(1.0, 2.0), 1, seed=30)
        assert result.n == 1 and result.hits in (0, 1)
