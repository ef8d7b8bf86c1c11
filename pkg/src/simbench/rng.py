"""Portable deterministic randomness.

Every randomized operation in this package draws from the SplitMix64
generator defined here rather than from ``random`` or numpy, so that a
(seed, input) pair produces the same output on any platform and is easy
to reimplement in another language.  The update equations are:

    state  = (state + 0x9E3779B97F4A7C15)            mod 2^64
    z      = state
    z      = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z      = (z XOR (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output = z XOR (z >> 31)

Per-item seeds are derived by hashing string keys with 64-bit FNV-1a and
XOR-folding them into the global seed (see :func:`derive_seed`), so work
split across documents never depends on processing order.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes | str) -> int:
    """64-bit FNV-1a hash of ``data`` (strings are UTF-8 encoded)."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def derive_seed(seed: int, *keys: str) -> int:
    """Mix string keys into ``seed``, yielding an independent stream seed.

    Each key is FNV-1a hashed and XORed in after a SplitMix64 scramble of
    the running value, so (seed, "a", "b") and (seed, "ab") differ.
    """
    value = seed & _MASK64
    for key in keys:
        value = _scramble(value) ^ fnv1a64(key)
    return value & _MASK64


def _scramble(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 stream with the helpers the harness needs."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via unbiased rejection sampling."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        bits = (n - 1).bit_length()
        while True:
            value = self.next_u64() >> (64 - bits) if bits else 0
            if value < n:
                return value

    def gauss(self) -> float:
        """Standard normal deviate (Box-Muller, one value per call pair)."""
        u1 = self.random()
        while u1 == 0.0:
            u1 = self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, population: int, k: int) -> list[int]:
        """k distinct indices from range(population), partial Fisher-Yates."""
        if k >= population:
            return list(range(population))
        indices = list(range(population))
        for i in range(k):
            j = i + self.below(population - i)
            indices[i], indices[j] = indices[j], indices[i]
        return indices[:k]


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero.

    Used for every token-count computation; Python's built-in round()
    would round halves to even and drift from the documented contract.
    """
    if x >= 0:
        return math.floor(x + 0.5)
    return math.ceil(x - 0.5)
