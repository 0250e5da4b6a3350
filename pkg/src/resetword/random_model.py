"""Uniform random automata with portable, counter-based seeding.

Generator (fully specified so other implementations can reproduce it):

``mix64(z)``, all arithmetic modulo 2**64::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Trial key: ``key = mix64(mix64(mix64(master) ^ n) ^ trial_index)``.
The ``i``-th raw output of a trial (``i = 1, 2, ...``) is
``mix64(key + i * 0x9E3779B97F4A7C15)``.

A uniform draw from ``0..n-1`` takes raw outputs until one falls below
``2**64 - (2**64 mod n)`` and returns it modulo ``n``. Transitions are drawn
state by state, letter by letter: ``delta[0][0], delta[0][1], ...``.
"""

from __future__ import annotations

from .automaton import Dfa

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_key(master: int, n: int, trial_index: int) -> int:
    return mix64(mix64(mix64(master) ^ n) ^ trial_index)


class CounterRng:
    def __init__(self, key: int):
        self.key = key & MASK64
        self.counter = 0

    def next64(self) -> int:
        self.counter += 1
        return mix64(self.key + self.counter * GAMMA)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next64()
            if r < limit:
                return r % n


def gen(n: int, k: int = 2, seed: int = 0, trial_index: int = 0) -> Dfa:
    """Draw every transition independently and uniformly from ``0..n-1``."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = CounterRng(trial_key(seed, n, trial_index))
    return Dfa(tuple(tuple(rng.below(n) for _ in range(k)) for _ in range(n)))
