"""The five concrete pointer-prediction experiments.

Every scenario exists in two forms: compiled to an abstract
(TrialSpec, Strategy) pair for closed-form analysis, and simulated
physically, event by event, with all comparisons done on raw draws.  The two
routes must agree; the test suite holds the analytic pair to 1e-12 and the
physical route to binomial error bars.

Physical trials follow one shape: realize the preparation stage, draw a
pointer, form the prediction by the scenario's comparison rule, realize the
outcome, record hit or miss.  Pointer ties at a threshold count as "below"
(measure-zero for continuous pointers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core import Strategy, TrialSpec, analytic_psp
from .montecarlo import (
    DEFAULT_PARTITION_SIZE,
    SimResult,
    TestVerdict,
    binomial_test_greater,
    binomial_test_two_sided,
    run_partitioned,
    summarize,
)
from .pointer import PointerDistribution, cauchy, exponential
from .rng import RandomStream


class InvalidScenario(ValueError):
    """Scenario fields violate the setup's geometric or probabilistic constraints."""


class DegenerateRealization(ValueError):
    """Both coins drew the same parameter (probability zero, but guarded)."""


@dataclass(frozen=True)
class EnvelopeScenario:
    """Two envelopes holding different known-to-differ amounts; guess the larger.

    A fair coin selects an envelope to open.  A random pointer is compared
    with the revealed amount: a pointer above it says "the other envelope is
    larger", otherwise "this one is".  With p = P(pointer < small_amount) and
    q = P(pointer > large_amount), the guess is right with probability
    1 - (p + q)/2 > 1/2, since a full-support pointer puts positive mass
    strictly between the two amounts.
    """

    small_amount: float
    large_amount: float
    pointer: PointerDistribution = field(default_factory=lambda: exponential(1.0))

    def __post_init__(self):
        if not 0 < self.small_amount < self.large_amount:
            raise InvalidScenario(
                "need 0 < small_amount < large_amount, got "
                f"small_amount={self.small_amount!r}, large_amount={self.large_amount!r}"
            )


@dataclass(frozen=True)
class RailroadScenario:
    """A train sits at one of two stations and a biased spinner picks its direction.

    The track is the real line with stations at s1_position < s2_position; a
    fair coin put the train at either one.  The spinner shows red with
    probability r in (1/2, 1); red sends the train back toward the middle,
    blue sends it outward.  A rider who predicts "east" exactly when a random
    pointer lies east of the current station is right with probability
    r - (r - 1/2)(p + q) > 1/2, where p = P(pointer west of s1_position) and
    q = P(pointer east of s2_position).
    """

    s1_position: float
    s2_position: float
    r: float
    pointer: PointerDistribution = field(default_factory=lambda: cauchy(0.0, 1.0))

    def __post_init__(self):
        if not self.s1_position < self.s2_position:
            raise InvalidScenario(
                f"need s1_position < s2_position, got s1_position={self.s1_position!r}, "
                f"s2_position={self.s2_position!r}"
            )
        if not 0.5 < self.r < 1.0:
            raise InvalidScenario(f"r must lie strictly between 1/2 and 1, got r={self.r!r}")


@dataclass(frozen=True)
class WilloughbyScenario:
    """A sleeper awakes at an unknown station; the next stop is the announced one.

    The announced stop sits at current_station, flanked by west_station and
    east_station.  A prior fair coin fixed the travel direction, which placed
    the train at the flanking station on the side it came from: at
    west_station when heading east, at east_station when heading west.  The
    rider compares a random pointer with the station they are standing in and
    predicts "east" when the pointer lies east of it.  With p = P(pointer
    west of west_station) and q = P(pointer east of east_station) the guess
    succeeds with probability 1 - (p + q)/2 > 1/2 -- and it can be made
    before the coin flip is ever revealed.
    """

    west_station: float
    current_station: float
    east_station: float
    pointer: PointerDistribution = field(default_factory=lambda: cauchy(0.0, 1.0))

    def __post_init__(self):
        if not self.west_station < self.current_station < self.east_station:
            raise InvalidScenario(
                "need west_station < current_station < east_station, got "
                f"west_station={self.west_station!r}, current_station={self.current_station!r}, "
                f"east_station={self.east_station!r}"
            )


@dataclass(frozen=True)
class UniformParameters:
    """Uniform(low, high) sampler for the coin-bag physical parameters."""

    low: float = 0.0
    high: float = 1.0

    def __post_init__(self):
        if not self.low < self.high:
            raise InvalidScenario(f"need low < high, got low={self.low!r}, high={self.high!r}")

    def sample(self, stream: RandomStream, size=None):
        return self.low + (self.high - self.low) * stream.uniform(size)

    def spec_string(self) -> str:
        return f"uniform:{self.low!r},{self.high!r}"


#: what physical quantity carries the coin parameter; the comparison
#: structure (predict heads iff pointer > parameter) is identical in all three
COIN_BAG_MODELS = ("position", "mass", "time")


@dataclass(frozen=True)
class CoinBagScenario:
    """Two complementary-bias coins, one kept at random, flipped once.

    Coin 1 lands heads with probability s1 < 1/2, Coin 2 with s2 = 1 - s1 >
    1/2.  The preparer draws two parameter values (a table position, a mass,
    or a lock time, per ``model``) and assigns the smaller one to Coin 2; a
    fair coin then decides which coin stays.  Heads frequency over many runs
    is exactly 1/2 -- the flip sequence is statistically indistinguishable
    from a fair coin -- yet predicting "heads" exactly when a random pointer
    exceeds the kept coin's parameter is right more than half the time.
    """

    s1: float
    s2: float
    model: Literal["position", "mass", "time"] = "position"
    parameter_sampler: UniformParameters = field(default_factory=UniformParameters)
    pointer: PointerDistribution = field(default_factory=lambda: cauchy(0.0, 1.0))

    def __post_init__(self):
        if not self.s1 < 0.5 < self.s2:
            raise InvalidScenario(f"need s1 < 1/2 < s2, got s1={self.s1!r}, s2={self.s2!r}")
        if abs(self.s1 + self.s2 - 1.0) > 1e-12:
            raise InvalidScenario(
                f"s1 + s2 must equal 1 within 1e-12, got {self.s1 + self.s2!r}"
            )
        if self.model not in COIN_BAG_MODELS:
            raise InvalidScenario(
                f"model must be one of {COIN_BAG_MODELS}, got {self.model!r}"
            )


Scenario = EnvelopeScenario | RailroadScenario | WilloughbyScenario | CoinBagScenario


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def envelope_tail_probs(sc: EnvelopeScenario) -> tuple[float, float]:
    """(p, q) = (P(pointer < small amount), P(pointer > large amount))."""
    return sc.pointer.cdf(sc.small_amount), 1.0 - sc.pointer.cdf(sc.large_amount)


def envelope_psp(sc: EnvelopeScenario) -> float:
    """Guess-the-larger-envelope success probability 1 - (p + q)/2."""
    p, q = envelope_tail_probs(sc)
    return 1.0 - 0.5 * (p + q)


def railroad_tail_probs(sc: RailroadScenario) -> tuple[float, float]:
    """(p, q) = mass west of the west station, east of the east station."""
    return sc.pointer.cdf(sc.s1_position), 1.0 - sc.pointer.cdf(sc.s2_position)


def railroad_psp(sc: RailroadScenario) -> float:
    """Direction-prediction success probability r - (r - 1/2)(p + q)."""
    p, q = railroad_tail_probs(sc)
    return sc.r - (sc.r - 0.5) * (p + q)


def willoughby_tail_probs(sc: WilloughbyScenario) -> tuple[float, float]:
    """(p, q) measured from the flanking stations."""
    return sc.pointer.cdf(sc.west_station), 1.0 - sc.pointer.cdf(sc.east_station)


def willoughby_psp(sc: WilloughbyScenario) -> float:
    """Direction-guess success probability 1 - (p + q)/2."""
    p, q = willoughby_tail_probs(sc)
    return 1.0 - 0.5 * (p + q)


def coin_bag_psp(sc: CoinBagScenario, realization: tuple[float, float]) -> float:
    """Prediction success probability 1/2 + (y_2 - y_1)(s2 - 1/2) for one realization."""
    trial, strategy = coin_bag_to_trial(sc, realization)
    return analytic_psp(trial, strategy)


# ---------------------------------------------------------------------------
# compilation to (TrialSpec, Strategy)
# ---------------------------------------------------------------------------

def envelope_to_trial(sc: EnvelopeScenario) -> tuple[TrialSpec, Strategy]:
    """Abstract form of the envelope experiment.

    Outcomes: the opened envelope holds the smaller amount (k=1) or the
    larger (k=2), each with weight 1/2.  "Success" is "the opened envelope
    holds the larger amount", so s = (0, 1) -- the second stage is
    deterministic given the first.  The rule predicts success when the
    pointer is at or below the revealed amount: y = (F(S), F(L)).
    """
    p, q = envelope_tail_probs(sc)
    return (
        TrialSpec(np.array([0.5, 0.5]), np.array([0.0, 1.0])),
        Strategy(np.array([p, 1.0 - q])),
    )


def railroad_to_trial(sc: RailroadScenario) -> tuple[TrialSpec, Strategy]:
    """Abstract form of the railroad experiment.

    Outcomes: train at the west station (k=1) or east station (k=2), weight
    1/2 each.  "Success" is "the train proceeds east": s = (r, 1 - r).  The
    rule predicts east when the pointer lies east of the current station, so
    y_k = P(pointer > station_k) = (1 - p, q).  The compiled pair reproduces
    r - (r - 1/2)(p + q) exactly.
    """
    p, q = railroad_tail_probs(sc)
    return (
        TrialSpec(np.array([0.5, 0.5]), np.array([sc.r, 1.0 - sc.r])),
        Strategy(np.array([1.0 - p, q])),
    )


def willoughby_to_trial(sc: WilloughbyScenario) -> tuple[TrialSpec, Strategy]:
    """Abstract form of the announced-stop experiment.

    Outcomes: stopped at the west flank (k=1, train heads east) or the east
    flank (k=2, train heads west), weight 1/2 each.  With success = "train
    goes east", s = (1, 0) and the east-of-me rule gives
    y = (1 - F(west_station), 1 - F(east_station)) = (1 - p, q).
    """
    p, q = willoughby_tail_probs(sc)
    return (
        TrialSpec(np.array([0.5, 0.5]), np.array([1.0, 0.0])),
        Strategy(np.array([1.0 - p, q])),
    )


def realize_parameters(sc: CoinBagScenario, stream: RandomStream) -> tuple[float, float]:
    """Draw one (coin1_param, coin2_param) pair; Coin 2 gets the smaller value."""
    for _ in range(100):
        a, b = (float(v) for v in sc.parameter_sampler.sample(stream, 2))
        if a != b:
            return max(a, b), min(a, b)
    raise DegenerateRealization("parameter sampler keeps returning identical values")


def coin_bag_to_trial(
    sc: CoinBagScenario, realization: tuple[float, float]
) -> tuple[TrialSpec, Strategy]:
    """Abstract form of the coin-bag experiment for one parameter realization.

    ``realization`` is (coin1_param, coin2_param) with Coin 2 strictly
    smaller.  y_k = P(pointer > param_k); the smaller parameter makes
    y_2 > y_1, which at p = 1/2 already guarantees PSP > 1/2.
    """
    c1, c2 = float(realization[0]), float(realization[1])
    if c1 == c2:
        raise DegenerateRealization(f"both coins drew parameter {c1!r}")
    if not c2 < c1:
        raise InvalidScenario(
            f"coin 2 must carry the smaller parameter, got coin1={c1!r}, coin2={c2!r}"
        )
    y1 = 1.0 - sc.pointer.cdf(c1)
    y2 = 1.0 - sc.pointer.cdf(c2)
    return (
        TrialSpec(np.array([0.5, 0.5]), np.array([sc.s1, sc.s2])),
        Strategy(np.array([y1, y2])),
    )


def scenario_to_trial(sc: Scenario, stream: RandomStream | None = None):
    """Compile any scenario; coin-bag needs a stream to draw its realization.

    Returns (trial, strategy, realization) where realization is None except
    for the coin bag.
    """
    if isinstance(sc, EnvelopeScenario):
        return (*envelope_to_trial(sc), None)
    if isinstance(sc, RailroadScenario):
        return (*railroad_to_trial(sc), None)
    if isinstance(sc, WilloughbyScenario):
        return (*willoughby_to_trial(sc), None)
    if isinstance(sc, CoinBagScenario):
        if stream is None:
            raise ValueError("compiling a coin-bag scenario requires a RandomStream")
        realization = realize_parameters(sc, stream)
        return (*coin_bag_to_trial(sc, realization), realization)
    raise TypeError(f"not a scenario: {sc!r}")


def analytic_scenario_psp(sc: Scenario) -> float | None:
    """Closed-form PSP where one exists; None for the coin bag, whose PSP
    varies per parameter realization."""
    if isinstance(sc, EnvelopeScenario):
        return envelope_psp(sc)
    if isinstance(sc, RailroadScenario):
        return railroad_psp(sc)
    if isinstance(sc, WilloughbyScenario):
        return willoughby_psp(sc)
    if isinstance(sc, CoinBagScenario):
        return None
    raise TypeError(f"not a scenario: {sc!r}")


# ---------------------------------------------------------------------------
# physical simulation kernels (one partition each; fixed draw order)
# ---------------------------------------------------------------------------

def _envelope_kernel(sc: EnvelopeScenario, count: int, stream: RandomStream) -> tuple[int]:
    # draws: envelope choice, pointer
    picked_large = stream.uniform(count) < 0.5
    v = sc.pointer.sample(stream, count)
    amount = np.where(picked_large, sc.large_amount, sc.small_amount)
    guessed_picked_is_larger = v <= amount
    hits = guessed_picked_is_larger == picked_large
    return (int(np.count_nonzero(hits)),)


def _railroad_kernel(sc: RailroadScenario, count: int, stream: RandomStream) -> tuple[int]:
    # draws: station coin, spinner, pointer
    at_west = stream.uniform(count) < 0.5
    red = stream.uniform(count) < sc.r
    v = sc.pointer.sample(stream, count)
    position = np.where(at_west, sc.s1_position, sc.s2_position)
    going_east = np.where(at_west, red, ~red)
    guessed_east = v > position
    hits = guessed_east == going_east
    return (int(np.count_nonzero(hits)),)


def _willoughby_world(sc: WilloughbyScenario, count: int, stream: RandomStream):
    """Shared randomness of one batch: stopped station and pointer.

    The direction coin and the stopped station are the same random bit seen
    at different times: heading east means the train came to rest at the
    west flank of the announced stop.
    """
    at_west = stream.uniform(count) < 0.5
    v = sc.pointer.sample(stream, count)
    position = np.where(at_west, sc.west_station, sc.east_station)
    return position, v


def _willoughby_kernel(sc: WilloughbyScenario, count: int, stream: RandomStream) -> tuple[int]:
    position, v = _willoughby_world(sc, count, stream)
    going_east = position == sc.west_station
    guessed_east = v > position
    hits = guessed_east == going_east
    return (int(np.count_nonzero(hits)),)


def _coin_bag_kernel(sc: CoinBagScenario, count: int, stream: RandomStream) -> tuple[int, int]:
    # draws: parameter pair, keep coin, pointer, flip
    pair = sc.parameter_sampler.sample(stream, (count, 2))
    kept_coin2 = stream.uniform(count) < 0.5
    v = sc.pointer.sample(stream, count)
    u_flip = stream.uniform(count)
    coin2_param = pair.min(axis=1)
    coin1_param = pair.max(axis=1)
    parameter = np.where(kept_coin2, coin2_param, coin1_param)
    heads_prob = np.where(kept_coin2, sc.s2, sc.s1)
    predicted_heads = v > parameter
    heads = u_flip < heads_prob
    hits = predicted_heads == heads
    return int(np.count_nonzero(hits)), int(np.count_nonzero(heads))


def _kernel_and_width(sc: Scenario):
    if isinstance(sc, EnvelopeScenario):
        return _envelope_kernel, 1
    if isinstance(sc, RailroadScenario):
        return _railroad_kernel, 1
    if isinstance(sc, WilloughbyScenario):
        return _willoughby_kernel, 1
    if isinstance(sc, CoinBagScenario):
        return _coin_bag_kernel, 2
    raise TypeError(f"not a scenario: {sc!r}")


def simulate_physical(
    sc: Scenario,
    n: int,
    seed: int,
    *,
    partition_size: int = DEFAULT_PARTITION_SIZE,
    workers: int = 1,
) -> SimResult:
    """Run n independent physical trials of a scenario.

    Each trial realizes the preparation stage, draws a pointer, forms the
    prediction by the scenario's comparison rule, realizes the outcome and
    records hit or miss.  The empirical hit rate estimates the scenario's
    analytic PSP (for the coin bag: its average over parameter realizations).
    """
    kernel, _ = _kernel_and_width(sc)
    tallies, parts = run_partitioned(
        lambda count, stream: kernel(sc, count, stream), n, seed, partition_size, workers
    )
    return summarize(int(tallies[0]), n, seed, parts, partition_size)


@dataclass(frozen=True)
class ContrastReport:
    """One coin-bag run seen from both sides: the flip looks fair, the
    prediction still beats chance."""

    prediction: SimResult
    prediction_test: TestVerdict
    heads: int
    heads_frequency: float
    fairness_test: TestVerdict


def coin_bag_contrast(
    sc: CoinBagScenario,
    n: int,
    seed: int,
    *,
    partition_size: int = DEFAULT_PARTITION_SIZE,
    workers: int = 1,
) -> ContrastReport:
    """Tally hits and heads in one run; test fairness (two-sided, null 1/2)
    and prediction advantage (one-sided greater, null 1/2) on the same data."""
    tallies, parts = run_partitioned(
        lambda count, stream: _coin_bag_kernel(sc, count, stream),
        n,
        seed,
        partition_size,
        workers,
    )
    hits, heads = int(tallies[0]), int(tallies[1])
    prediction = summarize(hits, n, seed, parts, partition_size)
    return ContrastReport(
        prediction=prediction,
        prediction_test=binomial_test_greater(prediction, 0.5),
        heads=heads,
        heads_frequency=heads / n,
        fairness_test=binomial_test_two_sided(heads, n, 0.5),
    )


def willoughby_timing_sequences(
    sc: WilloughbyScenario,
    n: int,
    seed: int,
    *,
    partition_size: int = DEFAULT_PARTITION_SIZE,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Guess sequences of two riders sharing the pointer and the preparation.

    The first rider commits a direction guess from (station, pointer) alone,
    before the coin flip is revealed; the second reads the flip first and
    then applies the same comparison.  Both derive their randomness from the
    same index-derived substreams, so the sequences must match element-wise.

    Returns (predicted_before, inferred_after, went_east), boolean arrays of
    length n with True meaning east.
    """
    counts = [min(partition_size, n - start) for start in range(0, n, partition_size)]
    root = RandomStream(seed)

    # rider 1: no direction is ever materialized before the guess
    before_parts = []
    for i, count in enumerate(counts):
        position, v = _willoughby_world(sc, count, root.substream(i))
        before_parts.append(v > position)

    # rider 2: rebuild the same worlds, read the direction, then compare
    after_parts = []
    direction_parts = []
    for i, count in enumerate(counts):
        position, v = _willoughby_world(sc, count, root.substream(i))
        went_east = position == sc.west_station
        direction_parts.append(went_east)
        after_parts.append(v > position)

    return (
        np.concatenate(before_parts),
        np.concatenate(after_parts),
        np.concatenate(direction_parts),
    )
