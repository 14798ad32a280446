"""SplitMix64 generator and FNV-1a hashing.

Both are specified bit-for-bit so that seeds produce identical streams in
any implementation; Python's ``random`` module is deliberately not used.
"""
from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211


def fnv1a64(data: bytes | str) -> int:
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & MASK64
    return h


class SplitMix64:
    """Minimal SplitMix64 stream with a few sampling helpers."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        threshold = (1 << 64) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range ({lo}, {hi})")
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        # top 53 bits -> [0, 1)
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        if not seq:
            raise IndexError("choice from empty sequence")
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, walking from the end."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def case_stream_seed(global_seed: int, case_id: str, variant_index: int) -> int:
    """Seed of the per-case mutation stream."""
    return (
        (global_seed & MASK64)
        ^ fnv1a64(case_id)
        ^ ((variant_index * GOLDEN_GAMMA) & MASK64)
    )


def derive_seed(seed: int, salt: str) -> int:
    """Stage-local seed: one SplitMix64 step over ``seed XOR fnv1a64(salt)``."""
    return SplitMix64((seed & MASK64) ^ fnv1a64(salt)).next_u64()
