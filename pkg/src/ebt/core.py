"""Closed-form algebra of two-stage Bernoulli trials and pointer strategies.

A two-stage trial first selects outcome ``k`` with probability ``p_k``, then
succeeds with probability ``s_k`` conditional on ``k``.  Marginally the
composite experiment looks like an ordinary Bernoulli trial with success
probability ``p = sum_k p_k * s_k``.

A prediction strategy is a vector ``y`` with ``y_k`` the probability of
predicting success given first-stage outcome ``k`` (physically: the chance
that an independent continuous pointer lands in outcome ``k``'s
predict-success region).  The probability that the prediction matches the
second-stage result is

    PSP = sum_k p_k * s_k * y_k  +  sum_k p_k * (1 - s_k) * (1 - y_k)
        = sum_k p_k * (1 + 2*s_k*y_k - s_k - y_k)

and the strategy beats chance (PSP > p) exactly when

    sum_k p_k * (2*s_k + y_k - 2*s_k*y_k) < 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: |sum of weights - 1| above this is rejected rather than renormalized.
NORMALIZATION_TOL = 1e-12

#: Slack allowed on the non-strict side of theorem comparisons (float noise
#: only; the statements themselves are exact algebra).
THEOREM_SLACK = 1e-12


class TrialValidationError(ValueError):
    """A proposed trial description violates an invariant."""


class EmptyOutcomeList(TrialValidationError):
    """The outcome list is empty."""


class NegativeWeight(TrialValidationError):
    """Some first-stage weight is negative."""


class WeightsNotNormalized(TrialValidationError):
    """First-stage weights do not sum to 1 within tolerance."""


class SuccessProbOutOfRange(TrialValidationError):
    """Some conditional success probability lies outside [0, 1]."""


class InvalidStrategy(ValueError):
    """A strategy vector has entries outside [0, 1] or the wrong shape."""


class LengthMismatch(ValueError):
    """Strategy length differs from the trial's outcome count."""


class WrongArity(ValueError):
    """An operation restricted to two-outcome trials got a different N."""


class PreconditionViolated(ValueError):
    """Inputs fall outside an operation's stated domain."""


@dataclass(frozen=True, eq=False)
class TrialSpec:
    """First-stage weights ``p_k`` and conditional success probabilities ``s_k``.

    Weights must be non-negative and sum to 1 within ``NORMALIZATION_TOL``;
    success probabilities must lie in [0, 1].  Arrays are copied and made
    read-only, so instances are safely shareable.
    """

    weights: np.ndarray
    success_probs: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        s = np.array(self.success_probs, dtype=float, copy=True)
        if w.ndim != 1 or s.ndim != 1 or w.size != s.size:
            raise TrialValidationError(
                "weights and success_probs must be 1-d sequences of equal length"
            )
        if w.size == 0:
            raise EmptyOutcomeList("a trial needs at least one outcome")
        bad = np.flatnonzero(w < 0)
        if bad.size:
            k = int(bad[0])
            raise NegativeWeight(f"outcomes[{k}] weight {w[k]!r} is negative")
        total = float(w.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise WeightsNotNormalized(
                f"outcomes[0..{w.size - 1}] weights sum to {total!r}; "
                f"they must sum to 1 within {NORMALIZATION_TOL}"
            )
        bad = np.flatnonzero((s < 0) | (s > 1))
        if bad.size:
            k = int(bad[0])
            raise SuccessProbOutOfRange(
                f"outcomes[{k}] success probability {s[k]!r} is outside [0, 1]"
            )
        w.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "success_probs", s)

    @property
    def n(self) -> int:
        """Number of first-stage outcomes."""
        return int(self.weights.size)

    def outcomes(self) -> list[tuple[float, float]]:
        """The (weight, success_prob) pairs, handy for serialization."""
        return [(float(p), float(s)) for p, s in zip(self.weights, self.success_probs)]

    def __repr__(self) -> str:
        return f"TrialSpec({self.outcomes()!r})"


@dataclass(frozen=True, eq=False)
class Strategy:
    """Per-outcome predict-success probabilities ``y_k``, each in [0, 1]."""

    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float, copy=True)
        if y.ndim != 1 or y.size == 0:
            raise InvalidStrategy("y must be a non-empty 1-d sequence")
        bad = np.flatnonzero((y < 0) | (y > 1))
        if bad.size:
            k = int(bad[0])
            raise InvalidStrategy(f"y[{k}] = {y[k]!r} is outside [0, 1]")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @classmethod
    def of(cls, value) -> "Strategy":
        """Coerce a Strategy or any 1-d sequence of probabilities."""
        return value if isinstance(value, cls) else cls(np.asarray(value, dtype=float))

    @property
    def n(self) -> int:
        return int(self.y.size)

    def __repr__(self) -> str:
        return f"Strategy({[float(v) for v in self.y]!r})"


def validate_trial(raw: Sequence[tuple[float, float]]) -> TrialSpec:
    """Build a TrialSpec from (weight, success_prob) pairs, or raise.

    Raises EmptyOutcomeList, NegativeWeight, WeightsNotNormalized or
    SuccessProbOutOfRange; messages name the offending ``outcomes[k]`` entry.
    """
    pairs = list(raw)
    if not pairs:
        raise EmptyOutcomeList("a trial needs at least one outcome")
    for k, pair in enumerate(pairs):
        try:
            weight, success = pair
        except (TypeError, ValueError):
            raise TrialValidationError(
                f"outcomes[{k}] must be a (weight, success_prob) pair, got {pair!r}"
            ) from None
        float(weight), float(success)  # fail early on non-numeric entries
    return TrialSpec(
        np.array([p for p, _ in pairs], dtype=float),
        np.array([s for _, s in pairs], dtype=float),
    )


def paired_arrays(trial: TrialSpec, strategy) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Validate that the strategy fits the trial; return (weights, s, y)."""
    strat = Strategy.of(strategy)
    if strat.n != trial.n:
        raise LengthMismatch(
            f"strategy has {strat.n} entries for a trial with {trial.n} outcomes"
        )
    return trial.weights, trial.success_probs, strat.y


def success_probability(trial: TrialSpec) -> float:
    """Marginal success probability p = sum_k p_k * s_k."""
    return float(trial.weights @ trial.success_probs)


def analytic_psp(trial: TrialSpec, strategy) -> float:
    """Probability that the pointer rule predicts the second stage correctly.

    Evaluates the collapsed form sum_k p_k * (1 + 2*s_k*y_k - s_k - y_k) of
    the hit probability; the result is clipped to [0, 1] against float dust.
    """
    w, s, y = paired_arrays(trial, strategy)
    value = float(np.sum(w * (1.0 + 2.0 * s * y - s - y)))
    return min(1.0, max(0.0, value))


def edge_condition(trial: TrialSpec, strategy) -> float:
    """E = sum_k p_k * (2*s_k + y_k - 2*s_k*y_k); the strategy beats chance iff E < 1.

    Identically, PSP + E = 1 + p, so E < 1 is the same strict event as PSP > p.
    """
    w, s, y = paired_arrays(trial, strategy)
    return float(np.sum(w * (2.0 * s + y - 2.0 * s * y)))


def optimal_strategy(trial: TrialSpec) -> tuple[Strategy, float]:
    """The PSP-maximizing strategy and its PSP.

    Per-outcome the PSP term is linear in y_k with slope p_k*(2*s_k - 1), so
    the maximum sits at y_k = 1 when s_k >= 1/2 and y_k = 0 when s_k < 1/2
    (ties take 1: predicting success costs nothing at s_k = 1/2).  The
    maximum equals p + sum_{s_k < 1/2} p_k * (1 - 2*s_k); the sum is the
    premium earned by predicting failure on failure-prone outcomes.
    """
    best = Strategy((trial.success_probs >= 0.5).astype(float))
    premium = float(
        np.sum(
            trial.weights
            * np.where(trial.success_probs < 0.5, 1.0 - 2.0 * trial.success_probs, 0.0)
        )
    )
    return best, success_probability(trial) + premium


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the closed forms say about one (trial, strategy) pair.

    ``edge`` is the beats-chance criterion value (PSP > p iff edge < 1);
    ``premium_bound`` is the best attainable PSP minus p over all strategies.
    """

    p: float
    psp: float
    edge: float
    beats_chance: bool
    premium_bound: float


def analyze(trial: TrialSpec, strategy) -> AnalysisReport:
    """Bundle p, PSP, the edge criterion and the attainable premium."""
    p = success_probability(trial)
    psp = analytic_psp(trial, strategy)
    edge = edge_condition(trial, strategy)
    _, best_psp = optimal_strategy(trial)
    return AnalysisReport(
        p=p,
        psp=psp,
        edge=edge,
        beats_chance=psp > p,
        premium_bound=best_psp - p,
    )


@dataclass(frozen=True)
class Theorem1Verdict:
    """``applicable``: p >= 1/2 and (N = 1 or y constant); ``holds``: PSP <= p."""

    applicable: bool
    holds: bool


def check_theorem1(trial: TrialSpec, strategy) -> Theorem1Verdict:
    """No-advantage check: one outcome, or a constant y, can never beat chance.

    The statement lives under the standing assumption that success is the
    likelier label, p >= 1/2; without it, always predicting failure on a
    failure-prone trial trivially beats p (N=1, s=0.2, y=0 has PSP=0.8).
    ``holds`` is PSP <= p + slack and must be true whenever ``applicable``.
    """
    w, s, y = paired_arrays(trial, strategy)
    p = success_probability(trial)
    applicable = p >= 0.5 - THEOREM_SLACK and (
        trial.n == 1 or bool(np.all(np.abs(y - y[0]) <= THEOREM_SLACK))
    )
    holds = analytic_psp(trial, strategy) <= p + THEOREM_SLACK
    return Theorem1Verdict(applicable=applicable, holds=bool(holds))


@dataclass(frozen=True)
class Theorem2Verdict:
    """``hypotheses_met``: s_1 < 1/2 < s_2, p >= 1/2 and PSP > p; ``conclusion_holds``: y_2 > y_1."""

    hypotheses_met: bool
    conclusion_holds: bool


def check_theorem2(trial: TrialSpec, strategy) -> Theorem2Verdict:
    """Ordering check for N = 2: beating chance forces the larger y onto the
    success-prone outcome, provided s_1 < 1/2 < s_2 and p >= 1/2.

    The testable content is the implication: whenever ``hypotheses_met``,
    ``conclusion_holds`` must be true.  (For N = 3 this ordering can fail,
    e.g. weights (0.2, 0.3, 0.5), s = (0.3, 0.5, 0.7), y = (0.1, 0.9, 0.7)
    has PSP = 0.572 > 0.56 = p with y_3 < y_2.)
    """
    if trial.n != 2:
        raise WrongArity(f"a two-outcome trial is required, got N={trial.n}")
    w, s, y = paired_arrays(trial, strategy)
    p = success_probability(trial)
    hypotheses = (
        s[0] < 0.5 < s[1]
        and p >= 0.5 - THEOREM_SLACK
        and analytic_psp(trial, strategy) > p
    )
    return Theorem2Verdict(
        hypotheses_met=bool(hypotheses), conclusion_holds=bool(y[1] > y[0])
    )


@dataclass(frozen=True)
class SufficiencyVerdict:
    """``premise``: y_1 < y_2; ``conclusion``: PSP > p; ``holds``: the implication."""

    premise: bool
    conclusion: bool
    holds: bool


def check_p_half_sufficiency(trial: TrialSpec, strategy) -> SufficiencyVerdict:
    """At p = 1/2 exactly (N = 2, s_1 < 1/2 < s_2), y_1 < y_2 already
    guarantees PSP > p; for p > 1/2 it does not.

    Under the stated preconditions ``holds`` is always true; the verdict
    carries the premise and conclusion separately for reporting.
    """
    if trial.n != 2:
        raise WrongArity(f"a two-outcome trial is required, got N={trial.n}")
    w, s, y = paired_arrays(trial, strategy)
    if not (s[0] < 0.5 < s[1]):
        raise PreconditionViolated(
            f"need s_1 < 1/2 < s_2, got s = ({s[0]!r}, {s[1]!r})"
        )
    p = success_probability(trial)
    if abs(p - 0.5) > THEOREM_SLACK:
        raise PreconditionViolated(f"need p = 1/2 within {THEOREM_SLACK}, got p = {p!r}")
    premise = bool(y[0] < y[1])
    conclusion = bool(analytic_psp(trial, strategy) > p)
    return SufficiencyVerdict(
        premise=premise, conclusion=conclusion, holds=(not premise) or conclusion
    )
