#!/usr/bin/env python3
"""A flip sequence that passes every fairness test yet can be predicted.

Two coins with complementary biases (heads probabilities 1/3 and 2/3); a
fair coin decides which one stays on the table, and that one is flipped.
Marginally, heads comes up with probability exactly 1/2: the flip record is
statistically indistinguishable from a fair coin.

The preparer, however, always gives the heads-prone coin the SMALLER
physical parameter: it sits further left (position), weighs less (mass), or
its safe unlocks earlier (time).  An experimenter who draws an independent
random parameter value and predicts heads exactly when it exceeds the kept
coin's parameter is right more than half the time -- without ever learning
which coin they are holding.
"""

from ebt import CoinBagScenario, coin_bag_contrast, coin_bag_to_trial, realize_parameters
from ebt.core import analytic_psp
from ebt.rng import RandomStream

SEED = 33
N = 1_000_000

print(__doc__)

sc = CoinBagScenario(s1=1.0 / 3.0, s2=2.0 / 3.0, model="position")

print("=" * 70)
print("1. One preparation, compiled to the abstract algebra")
print("=" * 70)
realization = realize_parameters(sc, RandomStream(SEED))
trial, strategy = coin_bag_to_trial(sc, realization)
print(f"coin 1 (tails-prone) parameter: {realization[0]:.4f}")
print(f"coin 2 (heads-prone) parameter: {realization[1]:.4f}  (always the smaller)")
print(f"predict-heads probabilities y = {[round(float(v), 4) for v in strategy.y]}")
print(f"per-realization PSP = 1/2 + (y2 - y1)(s2 - 1/2) = "
      f"{analytic_psp(trial, strategy):.4f}")

print()
print("=" * 70)
print(f"2. {N:,} full experiments: fairness and predictability side by side")
print("=" * 70)
contrast = coin_bag_contrast(sc, N, seed=SEED)
print(f"heads frequency:       {contrast.heads_frequency:.6f}")
print(f"two-sided fairness test vs 1/2: p-value = {contrast.fairness_test.p_value:.4f}"
      f"  -> reject at 1%? {contrast.fairness_test.reject_at[0.01]}")
print(f"prediction hit rate:   {contrast.prediction.empirical_psp:.6f}")
print(f"one-sided test vs 1/2: p-value = {contrast.prediction_test.p_value:.3e}"
      f"  -> reject at 0.1%? {contrast.prediction_test.reject_at[0.001]}")
print()
print("The flips look perfectly fair; the predictions still beat chance.")

print()
print("=" * 70)
print("3. Position, mass, and time are the same mathematics")
print("=" * 70)
for model in ("position", "mass", "time"):
    run = coin_bag_contrast(CoinBagScenario(s1=1 / 3, s2=2 / 3, model=model), 200_000, seed=5)
    print(f"model={model:<9} hit rate {run.prediction.empirical_psp:.4f}   "
          f"heads frequency {run.heads_frequency:.4f}")
print("""
All three preparations order the coins along some physical axis and compare
an independent draw on the same axis; relabeling the axis changes nothing.""")
