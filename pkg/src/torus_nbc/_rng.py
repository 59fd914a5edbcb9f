"""Seeded pseudo-random numbers for the simulation.

The generator is SplitMix64: state advances by a fixed odd constant and
each output is a bijective finalizer of the state.  It is fast, passes
BigCrush, and is trivially splittable, which is what makes worker-count
independence possible: trial ``i`` of a run seeded ``s`` always draws from
its own stream seeded with the ``(i+1)``-th output of the master stream,
no matter which thread executes it.

This module is the pure-Python reference; the compiled kernels repeat the
same arithmetic on ``uint64`` and the test suite checks they agree.
"""
from __future__ import annotations

GOLDEN = 0x9E3779B97F4A7C15
_MASK = 2**64 - 1


def mix64(z: int) -> int:
    """SplitMix64 finalizer (Stafford variant 13 constants)."""
    z = (z + GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def split_next(state: int) -> tuple[int, int]:
    """One step of the stream: return ``(output, new_state)``."""
    state = (state + GOLDEN) & _MASK
    z = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31), state


def derive_stream_seed(seed: int, index: int) -> int:
    """Seed of sub-stream ``index`` under master ``seed``.

    Equals the ``(index + 1)``-th output of the master stream, computed in
    O(1) so any trial's stream can be reconstructed without replaying the
    run.
    """
    return mix64((seed + index * GOLDEN) & _MASK)


def randbelow(state: int, n: int) -> tuple[int, int]:
    """Uniform draw from ``0..n-1`` by rejection; returns ``(value, new_state)``.

    The rejection threshold removes modulo bias exactly; for the pool
    sizes used here a rejection almost never happens.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    threshold = (-n) % (1 << 64) % n
    while True:
        x, state = split_next(state)
        if x >= threshold:
            return x % n, state
