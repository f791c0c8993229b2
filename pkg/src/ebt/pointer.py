"""Continuous full-support pointer distributions and half-line probabilities.

A pointer is an independent continuous draw that gets compared against an
outcome-linked threshold.  Downstream only half-line probabilities matter:
P(pointer < t) and P(pointer > t).  Full support (a strictly increasing CDF
on the support) keeps both strictly between 0 and 1 at interior thresholds,
which is what makes every pointer strategy's advantage strict.

Four families are provided; construction validates parameters, evaluation is
delegated to scipy, and sampling is inverse-transform from a RandomStream so
that draws are bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from scipy import stats

from .rng import RandomStream


class InvalidParameters(ValueError):
    """Distribution parameters outside the family's domain (e.g. scale <= 0)."""


#: family name -> (parameter names, scipy builder, support interval)
_FAMILIES = {
    "normal": (("mu", "sigma"), lambda mu, sigma: stats.norm(mu, sigma), (-math.inf, math.inf)),
    "cauchy": (("x0", "gamma"), lambda x0, gamma: stats.cauchy(x0, gamma), (-math.inf, math.inf)),
    "logistic": (("mu", "s"), lambda mu, s: stats.logistic(mu, s), (-math.inf, math.inf)),
    "exponential": (("rate",), lambda rate: stats.expon(scale=1.0 / rate), (0.0, math.inf)),
}

# Uniform draws of exactly 0.0 (probability 2**-53 each) would map to the
# support's lower edge; clamping to the smallest normal float keeps every
# sample strictly inside the support without statistical effect.
_MIN_UNIFORM = np.finfo(float).tiny


@dataclass(frozen=True)
class PointerDistribution:
    """One of the supported continuous families, e.g. ``cauchy(0, 1)``.

    ``params`` are positional in family order: normal(mu, sigma),
    cauchy(x0, gamma), logistic(mu, s), exponential(rate).  All scale/rate
    parameters must be positive and finite.
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise InvalidParameters(
                f"unknown distribution family {self.family!r}; "
                f"choose from {sorted(_FAMILIES)}"
            )
        names, _, _ = _FAMILIES[self.family]
        params = tuple(float(v) for v in self.params)
        if len(params) != len(names):
            raise InvalidParameters(
                f"{self.family} takes {len(names)} parameters {names}, got {len(params)}"
            )
        if any(not math.isfinite(v) for v in params):
            raise InvalidParameters(f"{self.family} parameters must be finite, got {params}")
        # the last parameter is the scale (or rate) in every family
        if params[-1] <= 0:
            raise InvalidParameters(
                f"{self.family} {names[-1]} must be positive, got {params[-1]!r}"
            )
        object.__setattr__(self, "params", params)

    @cached_property
    def _frozen(self):
        _, build, _ = _FAMILIES[self.family]
        return build(*self.params)

    @property
    def support(self) -> tuple[float, float]:
        """Open interval on which the CDF is strictly increasing."""
        return _FAMILIES[self.family][2]

    def cdf(self, x):
        """F(x); scalar in, float out; array in, array out."""
        value = self._frozen.cdf(x)
        return float(value) if np.isscalar(x) else np.asarray(value)

    def ppf(self, q):
        """Quantile function, the inverse of ``cdf`` on the support."""
        value = self._frozen.ppf(q)
        return float(value) if np.isscalar(q) else np.asarray(value)

    def sample(self, stream: RandomStream, size=None):
        """Inverse-transform draw(s) from ``stream``; deterministic per stream state."""
        u = np.maximum(stream.uniform(size), _MIN_UNIFORM)
        x = self._frozen.ppf(u)
        return float(x) if size is None else np.asarray(x)

    def region_probability(self, region: "HalfLineRegion") -> float:
        """Probability mass of a half line; the boundary point carries none."""
        mass = self.cdf(region.threshold)
        return mass if region.direction == "below" else 1.0 - mass

    def spec_string(self) -> str:
        """Compact text form, e.g. ``"cauchy:0.0,1.0"``; inverse of ``parse_distribution``."""
        return f"{self.family}:{','.join(repr(v) for v in self.params)}"

    def __repr__(self) -> str:
        return f"{self.family}({', '.join(repr(v) for v in self.params)})"


@dataclass(frozen=True)
class HalfLineRegion:
    """All points strictly above, or at-and-below, a finite threshold.

    Ties break toward "below": a pointer exactly at the threshold counts as
    below it.  The distinction is measure-zero for continuous pointers.
    """

    threshold: float
    direction: Literal["above", "below"]

    def __post_init__(self):
        if not math.isfinite(self.threshold):
            raise ValueError(f"threshold must be finite, got {self.threshold!r}")
        if self.direction not in ("above", "below"):
            raise ValueError(f"direction must be 'above' or 'below', got {self.direction!r}")


def normal(mu: float, sigma: float) -> PointerDistribution:
    return PointerDistribution("normal", (mu, sigma))


def cauchy(x0: float, gamma: float) -> PointerDistribution:
    return PointerDistribution("cauchy", (x0, gamma))


def logistic(mu: float, s: float) -> PointerDistribution:
    return PointerDistribution("logistic", (mu, s))


def exponential(rate: float) -> PointerDistribution:
    return PointerDistribution("exponential", (rate,))


def parse_distribution(text: str) -> PointerDistribution:
    """Parse ``"family:param,param"`` spec strings, e.g. ``"normal:0,1"``."""
    family, sep, rest = text.partition(":")
    family = family.strip()
    if not sep or family not in _FAMILIES:
        raise InvalidParameters(
            f"cannot parse distribution {text!r}; expected one of "
            + ", ".join(f"{name}:{','.join(_FAMILIES[name][0])}" for name in sorted(_FAMILIES))
        )
    try:
        params = tuple(float(part) for part in rest.split(","))
    except ValueError:
        raise InvalidParameters(f"non-numeric parameters in distribution {text!r}") from None
    return PointerDistribution(family, params)
