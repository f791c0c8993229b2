"""Seeded Monte Carlo estimation, binomial tests, and a brute-force oracle.

Simulations are split into fixed-size partitions; partition ``i`` draws from
substream ``i`` of the master seed, and integer tallies are merged in index
order.  Results therefore depend only on ``(seed, n, partition_size)`` and
are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .core import TrialSpec, paired_arrays
from .pointer import PointerDistribution
from .rng import RandomStream

DEFAULT_PARTITION_SIZE = 65_536

#: two-sided confidence level of the interval attached to every SimResult
CI_CONFIDENCE = 0.99

#: significance levels reported by the hypothesis tests
ALPHA_LEVELS = (0.05, 0.01, 0.001)

#: largest n for which binomial tails are computed exactly; above this a
#: normal approximation with continuity correction is used
EXACT_TEST_MAX_N = 100_000


class InvalidNull(ValueError):
    """Null success rate outside the open interval (0, 1)."""


class EmptySample(ValueError):
    """A sample statistic was requested for zero observations."""


@dataclass(frozen=True)
class SimResult:
    """Outcome of a seeded simulation run.

    ``ci_low``/``ci_high`` form the two-sided 99% Wilson score interval for
    the hit rate.  ``partitions`` and ``partition_size`` complete the
    reproducibility key: rerunning with the same (seed, n, partition_size)
    returns an equal SimResult regardless of worker count.
    """

    n: int
    hits: int
    empirical_psp: float
    std_error: float
    ci_low: float
    ci_high: float
    seed: int
    partitions: int
    partition_size: int


@dataclass(frozen=True)
class TestVerdict:
    """A p-value plus reject/retain flags at the standard alpha levels."""

    null_value: float
    alternative: str
    p_value: float
    reject_at: dict[float, bool]


def wilson_interval(hits: int, n: int, confidence: float = CI_CONFIDENCE) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion.

    Preferred over the Wald interval for its behavior near rates of 0 and 1;
    always contains hits/n.
    """
    if n <= 0:
        raise EmptySample("need at least one observation")
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    phat = hits / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom
    # the score interval contains phat by construction; rounding at the
    # hits=0 / hits=n boundaries must not be allowed to break that
    return min(max(0.0, center - half), phat), max(min(1.0, center + half), phat)


def partition_counts(n: int, partition_size: int) -> list[int]:
    """Trial counts per partition: full blocks plus a final remainder."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if partition_size < 1:
        raise ValueError(f"partition_size must be >= 1, got {partition_size}")
    return [min(partition_size, n - start) for start in range(0, n, partition_size)]


def run_partitioned(
    kernel: Callable[[int, RandomStream], Sequence[int]],
    n: int,
    seed: int,
    partition_size: int = DEFAULT_PARTITION_SIZE,
    workers: int = 1,
) -> tuple[np.ndarray, int]:
    """Run ``kernel(count, stream)`` over index-derived substreams and sum tallies.

    The kernel returns one or more integer tallies per partition; sums are
    exact, so the merge is order-independent and the result depends only on
    (seed, n, partition_size).
    """
    counts = partition_counts(n, partition_size)
    root = RandomStream(seed)

    def one(index: int) -> np.ndarray:
        return np.asarray(kernel(counts[index], root.substream(index)), dtype=np.int64)

    if workers <= 1:
        parts = [one(i) for i in range(len(counts))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(len(counts))))
    return np.sum(parts, axis=0), len(counts)


def summarize(hits: int, n: int, seed: int, partitions: int, partition_size: int) -> SimResult:
    """Package a tally into a SimResult with standard error and Wilson CI."""
    phat = hits / n
    low, high = wilson_interval(hits, n)
    return SimResult(
        n=int(n),
        hits=int(hits),
        empirical_psp=float(phat),
        std_error=float(math.sqrt(phat * (1.0 - phat) / n)),
        ci_low=float(low),
        ci_high=float(high),
        seed=int(seed),
        partitions=int(partitions),
        partition_size=int(partition_size),
    )


def simulate_trial(
    trial: TrialSpec,
    strategy,
    n: int,
    seed: int,
    *,
    partition_size: int = DEFAULT_PARTITION_SIZE,
    workers: int = 1,
) -> SimResult:
    """Abstract simulation of a trial under a strategy.

    Per trial, three uniforms are consumed in a fixed order: the first-stage
    outcome (inverse CDF over the weights), the predict-success event
    (Bernoulli y_k, the scalar stand-in for "pointer lands in the region"),
    and the success event (Bernoulli s_k).  A hit is a prediction matching
    the realized outcome.
    """
    w, s, y = paired_arrays(trial, strategy)
    cum = np.cumsum(w)
    top = w.size - 1

    def kernel(count: int, stream: RandomStream) -> tuple[int]:
        u_outcome = stream.uniform(count)
        u_predict = stream.uniform(count)
        u_success = stream.uniform(count)
        k = np.minimum(np.searchsorted(cum, u_outcome, side="right"), top)
        predicted = u_predict < y[k]
        succeeded = u_success < s[k]
        return (int(np.count_nonzero(predicted == succeeded)),)

    tallies, parts = run_partitioned(kernel, n, seed, partition_size, workers)
    return summarize(int(tallies[0]), n, seed, parts, partition_size)


def brute_force_psp(trial: TrialSpec, strategy) -> float:
    """Hit probability by exhaustive enumeration of the 4N joint atoms.

    Atoms are (first-stage outcome k) x (pointer inside/outside the
    predict-success region) x (success/failure); the mass of every atom whose
    prediction matches its outcome is accumulated term by term.  Kept
    deliberately independent of the collapsed formula in ``analytic_psp`` so
    the two can validate each other.
    """
    w, s, y = paired_arrays(trial, strategy)
    total = 0.0
    for k in range(w.size):
        for in_region in (True, False):
            for succeeded in (True, False):
                mass = (
                    w[k]
                    * (y[k] if in_region else 1.0 - y[k])
                    * (s[k] if succeeded else 1.0 - s[k])
                )
                predicted_success = in_region
                if predicted_success == succeeded:
                    total += mass
    return float(total)


def _p_value_greater(hits: int, n: int, p0: float) -> float:
    if n <= EXACT_TEST_MAX_N:
        # exact upper tail P(X >= hits) under Binomial(n, p0)
        return float(stats.binom.sf(hits - 1, n, p0))
    sigma = math.sqrt(n * p0 * (1.0 - p0))
    z = (hits - 0.5 - n * p0) / sigma
    return float(stats.norm.sf(z))


def _verdict(p0: float, alternative: str, p_value: float) -> TestVerdict:
    p_value = min(1.0, max(0.0, p_value))
    return TestVerdict(
        null_value=float(p0),
        alternative=alternative,
        p_value=p_value,
        reject_at={alpha: bool(p_value < alpha) for alpha in ALPHA_LEVELS},
    )


def binomial_test_greater(result: SimResult, p0: float) -> TestVerdict:
    """One-sided test of H0: hit rate = p0 against H1: hit rate > p0.

    Exact binomial tail for n <= EXACT_TEST_MAX_N, normal approximation with
    continuity correction above.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidNull(f"null value must be in (0, 1), got {p0!r}")
    return _verdict(p0, "greater", _p_value_greater(result.hits, result.n, p0))


def binomial_test_two_sided(hits: int, n: int, p0: float) -> TestVerdict:
    """Two-sided test of H0: rate = p0, for fairness-style checks.

    Exact (minlike) for n <= EXACT_TEST_MAX_N, else twice the smaller
    continuity-corrected normal tail.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidNull(f"null value must be in (0, 1), got {p0!r}")
    if n <= EXACT_TEST_MAX_N:
        p_value = float(stats.binomtest(hits, n, p0).pvalue)
    else:
        sigma = math.sqrt(n * p0 * (1.0 - p0))
        z = (abs(hits - n * p0) - 0.5) / sigma
        p_value = 2.0 * float(stats.norm.sf(z))
    return _verdict(p0, "two-sided", p_value)


def ks_distance(samples, dist: PointerDistribution) -> float:
    """Kolmogorov-Smirnov sup-distance between an empirical sample and a CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise EmptySample("ks_distance needs at least one sample")
    cdf = dist.cdf(x)
    grid = np.arange(1, n + 1) / n
    d_plus = float(np.max(grid - cdf))
    d_minus = float(np.max(cdf - (grid - 1.0 / n)))
    return max(d_plus, d_minus)
