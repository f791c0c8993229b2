"""Deterministic random streams with index-derived substreams."""

from __future__ import annotations

import numpy as np


class RandomStream:
    """A seeded random source whose children are derived by index, not by state.

    A stream is identified by ``(seed, spawn_key)``; ``substream(k)`` of a
    stream with key ``K`` has key ``K + (k,)``.  Because the identity alone
    determines the draw sequence, a simulation that hands partition ``i`` the
    substream ``i`` produces the same numbers for any worker count or
    scheduling order.

    Instances are single-owner: do not share one stream across threads; give
    each worker its own substream instead.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        seed = int(seed)
        if seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed}")
        self.seed = seed
        self.spawn_key = tuple(int(k) for k in spawn_key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def substream(self, index: int) -> "RandomStream":
        """Independent child stream number ``index`` of this stream."""
        return RandomStream(self.seed, self.spawn_key + (int(index),))

    def uniform(self, size=None):
        """Uniform draw(s) on [0, 1): a float for ``size=None``, else an array."""
        return self._generator.random(size)

    @property
    def generator(self) -> np.random.Generator:
        """The underlying numpy generator, for draws beyond plain uniforms."""
        return self._generator

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, spawn_key={self.spawn_key})"
