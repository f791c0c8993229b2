"""Seeded fuzz suites for the prediction theorems and algebraic identities.

Shared by the test suite and the ``ebt verify-theorems`` command.  Every
suite draws a fixed number of random instances from a seed, evaluates one
exact statement on each, and reports violations verbatim.  The statements
are theorems, so any violation is an implementation bug by construction.

Instance generation: weights come from normalizing uniform draws, success
probabilities and strategies are uniform on [0, 1].  Generators for the
strict-inequality suites keep a small margin away from degenerate
boundaries (equal y values, s_k at 1/2) so the strict comparisons stay
meaningful in float arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import Strategy, TrialSpec
from .montecarlo import brute_force_psp
from .rng import RandomStream

#: minimum |y_2 - y_1| and |s_k - 1/2| used by the strict-inequality generators
_MARGIN = 1e-6


@dataclass(frozen=True)
class Counterexample:
    """One violating instance, reported with everything needed to replay it."""

    suite: str
    index: int
    outcomes: list[tuple[float, float]]
    y: list[float]
    details: dict[str, float] = field(default_factory=dict)

    def __str__(self) -> str:
        detail = ", ".join(f"{k}={v!r}" for k, v in self.details.items())
        return (
            f"{self.suite}[{self.index}]: outcomes={self.outcomes!r} y={self.y!r}"
            + (f" ({detail})" if detail else "")
        )


@dataclass(frozen=True)
class SuiteReport:
    name: str
    instances: int
    violations: list[Counterexample]

    @property
    def passed(self) -> bool:
        return not self.violations


def random_trial(stream: RandomStream, n: int | None = None, n_min: int = 1, n_max: int = 8) -> TrialSpec:
    """Random trial with N in [n_min, n_max]: normalized-uniform weights, uniform s."""
    if n is None:
        n = n_min + int(stream.uniform() * (n_max - n_min + 1))
        n = min(n, n_max)
    while True:
        w = stream.uniform(n)
        total = w.sum()
        if total > 0:
            break
    return TrialSpec(w / total, stream.uniform(n))


def random_strategy(stream: RandomStream, n: int) -> Strategy:
    return Strategy(stream.uniform(n))


def _violation(suite, index, trial, strategy, **details) -> Counterexample:
    return Counterexample(
        suite=suite,
        index=index,
        outcomes=trial.outcomes(),
        y=[float(v) for v in Strategy.of(strategy).y],
        details={k: float(v) for k, v in details.items()},
    )


def _random_likely_success_trial(stream: RandomStream, n: int | None = None) -> TrialSpec:
    """Random trial conditioned on the standing assumption p >= 1/2."""
    while True:
        trial = random_trial(stream, n=n) if n is not None else random_trial(stream, n_min=2)
        if core.success_probability(trial) >= 0.5:
            return trial


def theorem1_suite(seed: int, instances: int) -> SuiteReport:
    """N = 1 or constant-y instances with p >= 1/2 must have PSP <= p (+ slack)."""
    stream = RandomStream(seed).substream(1)
    violations = []
    for i in range(instances):
        if i % 2 == 0:
            trial = _random_likely_success_trial(stream, n=1)
            strategy = random_strategy(stream, 1)
        else:
            trial = _random_likely_success_trial(stream)
            strategy = Strategy(np.full(trial.n, stream.uniform()))
        verdict = core.check_theorem1(trial, strategy)
        if not verdict.applicable or not verdict.holds:
            violations.append(
                _violation(
                    "theorem1", i, trial, strategy,
                    psp=core.analytic_psp(trial, strategy),
                    p=core.success_probability(trial),
                )
            )
    return SuiteReport("theorem1", instances, violations)


def _random_theorem2_instance(stream: RandomStream) -> tuple[TrialSpec, Strategy]:
    """N = 2 with s_1 < 1/2 < s_2 and p >= 1/2 (rejection-sampled weights)."""
    while True:
        s1 = stream.uniform() * (0.5 - _MARGIN)
        s2 = 0.5 + _MARGIN + stream.uniform() * (0.5 - _MARGIN)
        w1 = stream.uniform()
        p = w1 * s1 + (1.0 - w1) * s2
        if p >= 0.5:
            trial = TrialSpec(np.array([w1, 1.0 - w1]), np.array([s1, s2]))
            return trial, random_strategy(stream, 2)


def theorem2_suite(seed: int, instances: int) -> SuiteReport:
    """Whenever such an instance beats chance, y_2 > y_1 must hold."""
    stream = RandomStream(seed).substream(2)
    violations = []
    for i in range(instances):
        trial, strategy = _random_theorem2_instance(stream)
        verdict = core.check_theorem2(trial, strategy)
        if verdict.hypotheses_met and not verdict.conclusion_holds:
            violations.append(
                _violation(
                    "theorem2", i, trial, strategy,
                    psp=core.analytic_psp(trial, strategy),
                    p=core.success_probability(trial),
                )
            )
    return SuiteReport("theorem2", instances, violations)


def _random_p_half_instance(stream: RandomStream) -> tuple[TrialSpec, Strategy]:
    """N = 2, s_1 < 1/2 < s_2 with weights solving p = 1/2, and y_1 < y_2."""
    s1 = stream.uniform() * (0.5 - _MARGIN)
    s2 = 0.5 + _MARGIN + stream.uniform() * (0.5 - _MARGIN)
    w1 = (s2 - 0.5) / (s2 - s1)
    while True:
        a, b = stream.uniform(2)
        if abs(a - b) >= _MARGIN:
            break
    trial = TrialSpec(np.array([w1, 1.0 - w1]), np.array([s1, s2]))
    return trial, Strategy(np.array([min(a, b), max(a, b)]))


def p_half_sufficiency_suite(seed: int, instances: int) -> SuiteReport:
    """At p = 1/2, y_1 < y_2 must force PSP > p."""
    stream = RandomStream(seed).substream(3)
    violations = []
    for i in range(instances):
        trial, strategy = _random_p_half_instance(stream)
        verdict = core.check_p_half_sufficiency(trial, strategy)
        if not verdict.holds:
            violations.append(
                _violation(
                    "p_half_sufficiency", i, trial, strategy,
                    psp=core.analytic_psp(trial, strategy),
                    p=core.success_probability(trial),
                )
            )
    return SuiteReport("p_half_sufficiency", instances, violations)


def oracle_agreement_suite(seed: int, instances: int, tol: float = 1e-14) -> SuiteReport:
    """Brute-force atom enumeration must match the collapsed formula to tol."""
    stream = RandomStream(seed).substream(4)
    violations = []
    for i in range(instances):
        trial = random_trial(stream)
        strategy = random_strategy(stream, trial.n)
        exact = brute_force_psp(trial, strategy)
        collapsed = core.analytic_psp(trial, strategy)
        if abs(exact - collapsed) > tol:
            violations.append(
                _violation(
                    "oracle_agreement", i, trial, strategy,
                    brute_force=exact, analytic=collapsed,
                )
            )
    return SuiteReport("oracle_agreement", instances, violations)


def psp_edge_identity_suite(seed: int, instances: int, tol: float = 1e-12) -> SuiteReport:
    """PSP + edge = 1 + p to tol, for random instances."""
    stream = RandomStream(seed).substream(5)
    violations = []
    for i in range(instances):
        trial = random_trial(stream)
        strategy = random_strategy(stream, trial.n)
        psp = core.analytic_psp(trial, strategy)
        edge = core.edge_condition(trial, strategy)
        p = core.success_probability(trial)
        if abs(psp + edge - (1.0 + p)) > tol:
            violations.append(
                _violation("psp_edge_identity", i, trial, strategy, psp=psp, edge=edge, p=p)
            )
    return SuiteReport("psp_edge_identity", instances, violations)


def run_all(seed: int, instances: int) -> list[SuiteReport]:
    """All five suites with the given seed and per-suite instance count."""
    return [
        theorem1_suite(seed, instances),
        theorem2_suite(seed, instances),
        p_half_sufficiency_suite(seed, instances),
        oracle_agreement_suite(seed, instances),
        psp_edge_identity_suite(seed, instances),
    ]
