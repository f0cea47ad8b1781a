"""Seeded 64-bit SplitMix generator.

Randomized suites are driven by this generator rather than platform RNGs so
that a (config, seed) pair reproduces bit-identical sample streams anywhere.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0**-53


class SplitMix64:
    """SplitMix-style 64-bit generator with uniform/normal helpers."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        """Uniform double in ``[low, high)`` with 53 bits of resolution."""
        u = (self.next_u64() >> 11) * _INV_2_53
        return low + (high - low) * u

    def next_below(self, n: int) -> int:
        """Integer in ``[0, n)``; fine for the small ranges used here."""
        if n <= 0:
            raise ValueError("n must be positive")
        return self.next_u64() % n

    def normal(self) -> float:
        """Standard normal via Box-Muller, caching the paired draw."""
        if self._spare_normal is not None:
            value = self._spare_normal
            self._spare_normal = None
            return value
        u1 = ((self.next_u64() >> 11) + 1) * _INV_2_53  # in (0, 1]
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        self._spare_normal = radius * math.sin(angle)
        return radius * math.cos(angle)

    def complex_normal(self) -> complex:
        return complex(self.normal(), self.normal())
