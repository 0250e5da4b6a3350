"""Binary search for the shortest reset word using SAT queries.

Each probe asks whether a reset word of length exactly ``c`` exists. Since a
reset word stays a reset word when extended, that is the same as asking
whether the shortest one has length at most ``c``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .automaton import Dfa, Word, greedy_upper_bound, is_synchronizing, verify_reset_word
from .encoding import decode_word, encode
from .solver import CdclSolver


class NotSynchronizingError(ValueError):
    pass


class SoundnessError(RuntimeError):
    """A decoded word failed verification; indicates a bug in encoding or solver."""


@dataclass(frozen=True)
class Probe:
    c: int
    sat: bool
    seconds: float
    conflicts: int


@dataclass(frozen=True)
class ShortestResult:
    length: int
    word: Word
    probes: Tuple[Probe, ...] = field(default=())
    initial_upper: int = 0

    @property
    def queries(self) -> int:
        return len(self.probes)


def synchro_word(dfa: Dfa, c: int, solver=None, budget: Optional[int] = None) -> Optional[Word]:
    """A reset word of length ``c`` if one exists (so the shortest is <= c), else ``None``."""
    return _probe(dfa, c, solver or CdclSolver(), budget)[0]


def _probe(dfa, c, solver, budget):
    formula, vm = encode(dfa, c)
    start = time.perf_counter()
    result = solver.solve(formula, budget)
    elapsed = time.perf_counter() - start
    word = None
    if result.sat:
        word = decode_word(result.model, vm)
        if not verify_reset_word(dfa, word):
            raise SoundnessError(f"decoded word of length {c} is not a reset word")
    return word, Probe(c, result.sat, elapsed, result.conflicts)


def shortest_reset_word(
    dfa: Dfa,
    solver=None,
    budget: Optional[int] = None,
    fig1_exact: bool = False,
    check: bool = True,
) -> ShortestResult:
    """Exact shortest reset word of a synchronizing 2-letter automaton.

    Keeps ``lo < shortest <= hi``. ``hi`` starts at the greedy word length,
    or at ``n**3`` with ``fig1_exact``; ``lo`` starts at 0. ``budget`` is a
    per-probe conflict limit.
    """
    if dfa.k != 2:
        raise ValueError(f"need a 2-letter automaton, got k={dfa.k}")
    if check and not is_synchronizing(dfa):
        raise NotSynchronizingError("automaton has no reset word")
    if dfa.n == 1:
        return ShortestResult(0, ())
    solver = solver or CdclSolver()

    if fig1_exact:
        hi, best = dfa.n ** 3, None
    else:
        greedy = greedy_upper_bound(dfa)
        if greedy is None:
            raise NotSynchronizingError("automaton has no reset word")
        hi, best = greedy
    initial = hi
    lo = 0
    probes: List[Probe] = []
    while True:
        c = (lo + hi) // 2
        if c == lo:
            break
        word, probe = _probe(dfa, c, solver, budget)
        probes.append(probe)
        if word is not None:
            hi, best = c, word
        else:
            lo = c
    if best is None:
        # never probed at hi: only happens when hi is the untested n**3 bound
        best, probe = _probe(dfa, hi, solver, budget)
        probes.append(probe)
        if best is None:
            raise NotSynchronizingError("no reset word within the cubic bound")
    return ShortestResult(hi, best, tuple(probes), initial)
