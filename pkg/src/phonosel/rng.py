"""Fixed, documented pseudo-random generator for reproducible sampling.

Manifests must be bit-identical across platforms and Python versions,
so random selection never uses the interpreter's default generator.
Instead we pin SplitMix64 (Steele, Lea & Flood's 64-bit mixer, the
seeding generator of java.util.SplittableRandom):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output = z ^ (z >> 31)

with all arithmetic modulo 2**64. Bounded draws use rejection sampling
(draw again while the raw value falls in the biased tail), so they are
exactly uniform. Sampling without replacement is a partial
Fisher-Yates shuffle over the candidate list.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


class SplitMix64:
    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), exactly unbiased."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def sample_without_replacement(items: Sequence[T], k: int, seed: int) -> list[T]:
    """Draw k distinct items uniformly, via a partial Fisher-Yates shuffle.

    The result depends only on (items order, k, seed).
    """
    if k > len(items):
        raise ValueError(f"cannot sample {k} items from {len(items)}")
    pool = list(items)
    rng = SplitMix64(seed)
    for i in range(k):
        j = i + rng.below(len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
    return pool[:k]
