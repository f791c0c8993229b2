#!/usr/bin/env python3
"""Predicting a train's direction before the spinner that decides it is spun.

A train sits at one of two stations (fair coin), and a biased spinner then
sends it east or west: red (probability r > 1/2) points it back toward the
middle of the line, blue points it outward.  Marginally the train goes east
with probability exactly 1/2.

A rider who marks a random spot on the line and predicts "east" exactly when
that spot lies east of the current station is right with probability
r - (r - 1/2)(p + q) > 1/2, where p and q are the pointer tail masses beyond
the two stations.  The prediction is fixed before the spinner is touched.
"""

import numpy as np

from ebt import RailroadScenario, railroad_psp, railroad_to_trial, simulate_physical
from ebt.core import analytic_psp, success_probability
from ebt.pointer import cauchy

SEED = 7

print(__doc__)

pointer = cauchy(0.0, 1.0)
edge = float(pointer.ppf(0.9))  # stations placed so p = q = 0.1
sc = RailroadScenario(s1_position=-edge, s2_position=edge, r=0.75, pointer=pointer)
p, q = pointer.cdf(sc.s1_position), 1.0 - pointer.cdf(sc.s2_position)

print("=" * 70)
print(f"1. Setup: stations at ±{edge:.4f}, r = {sc.r}, cauchy(0,1) pointer")
print("=" * 70)
print(f"p = P(pointer west of S1) = {p:.4f}")
print(f"q = P(pointer east of S2) = {q:.4f}")
print()
print("station  spinner  direction  P(pointer correct)  combined")
rows = [
    ("S1", "red ", "east", 1 - p, 0.5 * sc.r * (1 - p)),
    ("S1", "blue", "west", p, 0.5 * (1 - sc.r) * p),
    ("S2", "red ", "west", 1 - q, 0.5 * sc.r * (1 - q)),
    ("S2", "blue", "east", q, 0.5 * (1 - sc.r) * q),
]
for station, spinner, direction, correct, combined in rows:
    print(f"{station:<8} {spinner:<8} {direction:<10} {correct:<19.4f} {combined:.4f}")
total = sum(r[-1] for r in rows)
print(f"{'':>48} sum = {total:.4f}")
print(f"closed form r - (r - 1/2)(p + q) = {railroad_psp(sc):.4f}")

print()
print("=" * 70)
print("2. Compiled to an abstract trial (success := train goes east)")
print("=" * 70)
trial, strategy = railroad_to_trial(sc)
print(f"outcomes: {trial.outcomes()}  ->  marginal p = {success_probability(trial)}")
print(f"predict-east probabilities per station: "
      f"{[round(float(v), 4) for v in strategy.y]}")
print(f"abstract PSP = {analytic_psp(trial, strategy):.4f}")

print()
print("=" * 70)
print("3. One million physical rides")
print("=" * 70)
result = simulate_physical(sc, 1_000_000, seed=SEED)
print(f"empirical direction-guess rate: {result.empirical_psp:.6f}")
print(f"analytic value:                 {railroad_psp(sc):.6f}")
print(f"99% Wilson interval:            [{result.ci_low:.6f}, {result.ci_high:.6f}]")

print()
print("=" * 70)
print("4. The premium grows with the spinner bias")
print("=" * 70)
print(f"{'r':>6} {'PSP':>10}")
for r in np.arange(0.55, 1.0, 0.1):
    print(f"{r:>6.2f} {railroad_psp(RailroadScenario(-edge, edge, float(r), pointer)):>10.4f}")
print("\nAt r = 1/2 the spinner is fair and the pointer is useless; as r -> 1")
print("the ride becomes deterministic given the station, and PSP -> r.")
