"""Shared plumbing: named preconditions, a deterministic RNG, exactly rounded
summation and the blocked thread-pool helper used by the evaluators.

Summation policy: every sum that feeds an equality check is accumulated with
``math.fsum`` (error-free transformation, exactly rounded).  The result is
therefore independent of term order, so segmented / threaded evaluation is
bit-identical to the monolithic one by construction.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

MASK64 = (1 << 64) - 1

DEFAULT_BLOCK_SIZE = 1 << 14


class PreconditionError(ValueError):
    """A named precondition was violated; ``name`` identifies which one."""

    def __init__(self, name: str, message: str):
        super().__init__(f"precondition '{name}' violated: {message}")
        self.name = name


class WorkBudgetError(RuntimeError):
    """Requested computation exceeds the configured work budget."""


def require(condition, name: str, message: str) -> None:
    if not condition:
        raise PreconditionError(name, message)


class SplitMix64:
    """Deterministic 64-bit generator; the stream depends only on the seed.

    Used instead of ``random.Random`` so that sampled choices are stable
    across Python versions, which the byte-identical report contract needs.
    """

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n)."""
        require(n > 0, "n", "sampling range must be nonempty")
        threshold = ((MASK64 + 1) // n) * n
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi], endpoints included."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def distinct(self, lo: int, hi: int, count: int, accept=None) -> list:
        """First ``count`` distinct accepted values drawn from [lo, hi]."""
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < count:
            v = self.randint(lo, hi)
            if v in seen or (accept is not None and not accept(v)):
                continue
            seen.add(v)
            out.append(v)
        return out


def thread_width(override: int | None = None) -> int:
    """Parallelism width: explicit override, else CHARSUM_THREADS, else 1."""
    if override is not None and override > 0:
        return int(override)
    raw = os.environ.get("CHARSUM_THREADS", "").strip()
    if raw:
        try:
            width = int(raw)
        except ValueError:
            return 1
        if width > 0:
            return width
    return 1


def block_ranges(lo: int, hi: int, block_size: int | None = None) -> list[tuple[int, int]]:
    """Split the half-open range [lo, hi) into consecutive blocks."""
    size = block_size or DEFAULT_BLOCK_SIZE
    require(size > 0, "block_size", "must be positive")
    return [(a, min(a + size, hi)) for a in range(lo, hi, size)]


def map_blocks(fn, blocks, threads: int = 1) -> list:
    """Apply ``fn`` to every block; results come back in block order
    regardless of scheduling, so downstream reductions are reproducible."""
    if threads <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def fsum_chunks(chunks) -> float:
    """Exactly rounded sum of a sequence of float arrays/lists."""
    arrays = [np.asarray(c, dtype=np.float64) for c in chunks if len(c)]
    if not arrays:
        return 0.0
    flat = arrays[0] if len(arrays) == 1 else np.concatenate(arrays)
    return math.fsum(flat)


def complex_fsum(values) -> complex:
    """Exactly rounded complex sum (real and imaginary parts independently)."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.size == 0:
        return 0.0 + 0.0j
    return complex(math.fsum(arr.real), math.fsum(arr.imag))
