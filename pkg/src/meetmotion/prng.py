"""Seeded 64-bit PRNG (splitmix64) for cross-platform reproducible game runs."""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 generator; identical seeds give identical sequences everywhere.

    State is a single 64-bit integer, so instances are cheap to copy and
    safe to hand between threads as values.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        """Advance the state and return the next 64-bit output."""
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def below(self, n: int) -> int:
        """Uniform-ish integer in [0, n) via modulo (bias ~n/2^64, accepted)."""
        if n < 1:
            raise ValueError("below() needs n >= 1")
        return self.next_u64() % n

    def unit(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def copy(self) -> "SplitMix64":
        dup = SplitMix64(0)
        dup.state = self.state
        return dup


def mix_seed(seed: int, salt: int) -> int:
    """Derive a sub-seed (e.g. per game episode) from a base seed and a salt."""
    return SplitMix64((seed ^ salt) & _MASK64).next_u64()
