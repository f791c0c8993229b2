"""Pointer-based prediction of two-stage Bernoulli trials.

Closed-form prediction-success probabilities, optimal pointer strategies,
the no-advantage and strategy-ordering theorems as checkable predicates, and
seeded Monte Carlo simulation of the classic concrete setups (envelope
guessing, the random railroad, the announced next stop, and the two-coin
bag) that realize them physically.
"""

from .core import (
    AnalysisReport,
    EmptyOutcomeList,
    InvalidStrategy,
    LengthMismatch,
    NegativeWeight,
    PreconditionViolated,
    Strategy,
    SuccessProbOutOfRange,
    SufficiencyVerdict,
    Theorem1Verdict,
    Theorem2Verdict,
    TrialSpec,
    TrialValidationError,
    WeightsNotNormalized,
    WrongArity,
    analytic_psp,
    analyze,
    check_p_half_sufficiency,
    check_theorem1,
    check_theorem2,
    edge_condition,
    optimal_strategy,
    success_probability,
    validate_trial,
)
from .montecarlo import (
    EmptySample,
    InvalidNull,
    SimResult,
    TestVerdict,
    binomial_test_greater,
    binomial_test_two_sided,
    brute_force_psp,
    ks_distance,
    simulate_trial,
    wilson_interval,
)
from .pointer import (
    HalfLineRegion,
    InvalidParameters,
    PointerDistribution,
    cauchy,
    exponential,
    logistic,
    normal,
    parse_distribution,
)
from .rng import RandomStream
from .scenarios import (
    CoinBagScenario,
    ContrastReport,
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

__version__ = "0.1.0"
