#!/usr/bin/env python3
"""A tour of the two-stage trial algebra: edges, premiums, and two theorems.

A two-stage trial draws outcome k with weight p_k, then succeeds with
probability s_k.  A pointer strategy y assigns each outcome a probability of
predicting success.  Everything below is closed-form:

  PSP            = sum_k p_k (1 + 2 s_k y_k - s_k - y_k)
  edge criterion = sum_k p_k (2 s_k + y_k - 2 s_k y_k)   (beats chance iff < 1)
  best strategy  = predict failure exactly where s_k < 1/2
  max premium    = sum_{s_k < 1/2} p_k (1 - 2 s_k)
"""

from ebt import (
    Strategy,
    analyze,
    check_theorem1,
    check_theorem2,
    optimal_strategy,
    validate_trial,
)
from ebt.montecarlo import brute_force_psp, simulate_trial
from ebt.verify import run_all

print(__doc__)

print("=" * 70)
print("1. A three-outcome trial that beats chance with non-monotone y")
print("=" * 70)
trial = validate_trial([(0.2, 0.3), (0.3, 0.5), (0.5, 0.7)])
y = Strategy.of([0.1, 0.9, 0.7])
report = analyze(trial, y)
print(f"outcomes: {trial.outcomes()}")
print(f"y = {list(map(float, y.y))}")
print(f"p = {report.p:.3f}   PSP = {report.psp:.3f}   edge = {report.edge:.3f}")
print(f"beats chance: {report.beats_chance}   best possible premium: {report.premium_bound:.3f}")
print(f"brute-force enumeration agrees: {brute_force_psp(trial, y):.3f}")
print()
print("Note y_3 < y_2 although s_3 > s_2: with three outcomes, beating chance")
print("does not force the strategy to be ordered like the success probabilities.")

print()
print("=" * 70)
print("2. With two outcomes it does (when p >= 1/2)")
print("=" * 70)
two = validate_trial([(0.5, 0.4), (0.5, 0.7)])
for candidate in ([0.0, 1.0], [0.2, 0.9], [0.9, 0.2]):
    verdict = check_theorem2(two, candidate)
    psp = analyze(two, candidate).psp
    print(f"y = {candidate}:  PSP = {psp:.3f}  "
          f"hypotheses met: {verdict.hypotheses_met}  y2 > y1: {verdict.conclusion_holds}")

print()
print("=" * 70)
print("3. The optimal strategy and its premium")
print("=" * 70)
best, max_psp = optimal_strategy(two)
print(f"best y = {list(map(float, best.y))}, max PSP = {max_psp:.2f}")
print("Predict tails on the tails-prone coin, heads on the heads-prone one:")
print(f"0.55 + 0.5 * (1 - 2*0.4) = {0.55 + 0.5 * (1 - 0.8):.2f}")

print()
print("=" * 70)
print("4. No-advantage cases: one outcome, or one constant y")
print("=" * 70)
single = validate_trial([(1.0, 0.7)])
print(f"N=1, s=0.7, y=1.0 -> {check_theorem1(single, [1.0])}")
print(f"uniform y on the two-coin trial -> {check_theorem1(two, [0.6, 0.6])}")
print("A constant y would mean predicting better than chance before the first")
print("stage even runs; the algebra forbids it.")

print()
print("=" * 70)
print("5. Fuzzing the theorems (1,000 instances per suite)")
print("=" * 70)
for suite in run_all(seed=0, instances=1000):
    status = "PASS" if suite.passed else "FAIL"
    print(f"{suite.name:<22} {suite.instances:>5} instances  "
          f"{len(suite.violations):>2} violations  {status}")

print()
print("=" * 70)
print("6. Monte Carlo agrees with the algebra")
print("=" * 70)
result = simulate_trial(trial, y, 1_000_000, seed=1)
print(f"empirical PSP over 1,000,000 trials: {result.empirical_psp:.4f}  "
      f"(analytic {report.psp:.4f})")
print(f"99% Wilson interval: [{result.ci_low:.4f}, {result.ci_high:.4f}]")
