"""Seedable, splittable random streams.

Streams are PCG64 bit generators keyed by ``SeedSequence(seed, spawn_key=(index,))``.
Only the raw 64-bit output of the bit generator is consumed, and integer
and uniform draws are derived from it here, so trajectories do not depend
on numpy's ``Generator`` method implementations (which are not covered by
numpy's stream-compatibility policy).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

TWO_64 = 1 << 64


class Stream:
    """A single-owner deterministic stream of 64-bit words."""

    __slots__ = ("_bits",)

    def __init__(self, seed: int, index: int | None = None) -> None:
        if seed < 0:
            raise ValueError("seed must be non-negative")
        spawn_key = () if index is None else (index,)
        self._bits = np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key))

    @classmethod
    def for_trajectory(cls, seed: int, index: int) -> Stream:
        return cls(seed, index)

    def word(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection, no modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        if n == 1:
            return 0
        if n > TWO_64:
            raise ValueError("n exceeds 2**64")
        limit = TWO_64 - TWO_64 % n
        while True:
            w = self.word()
            if w < limit:
                return w % n

    def uniform(self) -> Fraction:
        """Uniform rational in ``[0, 1)`` with denominator ``2**64``."""
        return Fraction(self.word(), TWO_64)

    def state(self) -> dict:
        return self._bits.state

    def copy(self) -> Stream:
        other = Stream.__new__(Stream)
        other._bits = np.random.PCG64()
        other._bits.state = self._bits.state
        return other
