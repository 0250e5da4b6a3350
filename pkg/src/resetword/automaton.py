"""Deterministic automata over a dense alphabet, and reset-word basics.

States are the integers ``0..n-1`` and letters are ``0..k-1``; with two
letters, ``0`` prints as ``a`` and ``1`` as ``b``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Word = Tuple[int, ...]

BRUTE_FORCE_MAX_STATES = 14

LETTER_NAMES = "abcdefghijklmnopqrstuvwxyz"


class AutomatonFormatError(ValueError):
    """Raised for malformed automaton text; carries the 1-based line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Dfa:
    """A complete DFA without initial or final states.

    ``delta[q][x]`` is the state reached from ``q`` on letter ``x``.
    """

    delta: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        delta = tuple(tuple(int(t) for t in row) for row in self.delta)
        object.__setattr__(self, "delta", delta)
        if not delta:
            raise ValueError("automaton needs at least one state")
        k = len(delta[0])
        if k < 1:
            raise ValueError("automaton needs at least one letter")
        n = len(delta)
        for q, row in enumerate(delta):
            if len(row) != k:
                raise ValueError(f"state {q} has {len(row)} transitions, expected {k}")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"state {q} has out-of-range target {t}")

    @property
    def n(self) -> int:
        return len(self.delta)

    @property
    def k(self) -> int:
        return len(self.delta[0])

    @classmethod
    def from_letter_maps(cls, *maps: Sequence[int]) -> "Dfa":
        """Build from one state map per letter, e.g. ``from_letter_maps(a, b)``."""
        return cls(tuple(zip(*maps)))

    def letter_map(self, x: int) -> Tuple[int, ...]:
        return tuple(row[x] for row in self.delta)


def cerny(n: int) -> Dfa:
    """The Černý automaton: ``a`` rotates, ``b`` sends 0 to 1 and fixes the rest."""
    a = [(q + 1) % n for q in range(n)]
    b = [1 if q == 0 and n > 1 else q for q in range(n)]
    return Dfa.from_letter_maps(a, b)


def apply_word(dfa: Dfa, q: int, word: Iterable[int]) -> int:
    delta = dfa.delta
    for x in word:
        q = delta[q][x]
    return q


def image(dfa: Dfa, states: Iterable[int], word: Sequence[int]) -> frozenset:
    return frozenset(apply_word(dfa, q, word) for q in states)


def verify_reset_word(dfa: Dfa, word: Sequence[int]) -> bool:
    return len(image(dfa, range(dfa.n), word)) == 1


def _pair_index(n: int):
    """Map unordered pairs p<q to dense ids; returns (index dict, pair list)."""
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]
    return {pq: i for i, pq in enumerate(pairs)}, pairs


def _merge_table(dfa: Dfa):
    """Backward BFS on the pair automaton from the diagonal.

    Returns ``(pairs, dist, step)`` where ``dist[i]`` is the length of the
    shortest word merging pair ``i`` (``-1`` if none) and ``step[i]`` is the
    smallest letter starting such a word.
    """
    n, k, delta = dfa.n, dfa.k, dfa.delta
    index, pairs = _pair_index(n)
    preds = [[] for _ in pairs]
    dist = [-1] * len(pairs)
    step = [-1] * len(pairs)
    queue = deque()
    for i, (p, q) in enumerate(pairs):
        for x in range(k):
            s, t = delta[p][x], delta[q][x]
            if s == t:
                if dist[i] < 0:
                    dist[i], step[i] = 1, x
                    queue.append(i)
            else:
                preds[index[(s, t) if s < t else (t, s)]].append((i, x))
    while queue:
        j = queue.popleft()
        for i, x in preds[j]:
            if dist[i] < 0:
                dist[i] = dist[j] + 1
                queue.append(i)
    # smallest letter on some shortest path, independent of queue order
    for i, (p, q) in enumerate(pairs):
        if dist[i] > 1:
            for x in range(k):
                s, t = delta[p][x], delta[q][x]
                j = index[(s, t) if s < t else (t, s)]
                if dist[j] == dist[i] - 1:
                    step[i] = x
                    break
    return index, pairs, dist, step


def is_synchronizing(dfa: Dfa) -> bool:
    """Pair-automaton test: every pair of states can be merged by some word."""
    if dfa.n == 1:
        return True
    _, _, dist, _ = _merge_table(dfa)
    return all(d > 0 for d in dist)


def brute_force_shortest(dfa: Dfa, max_states: int = BRUTE_FORCE_MAX_STATES) -> Optional[Tuple[int, Word]]:
    """Exact shortest reset word by BFS over the subset automaton.

    Returns ``(length, word)`` or ``None`` when the automaton is not
    synchronizing. Refuses automata above ``max_states`` states.
    """
    n, k = dfa.n, dfa.k
    if n > max_states:
        raise ValueError(f"brute force limited to {max_states} states, got {n}")
    maps = [dfa.letter_map(x) for x in range(k)]

    def step(mask: int, m) -> int:
        out = 0
        q = 0
        while mask:
            if mask & 1:
                out |= 1 << m[q]
            mask >>= 1
            q += 1
        return out

    start = (1 << n) - 1
    parent = {start: None}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        if mask & (mask - 1) == 0:
            word = []
            while parent[mask] is not None:
                mask, x = parent[mask]
                word.append(x)
            word.reverse()
            return len(word), tuple(word)
        for x in range(k):
            nxt = step(mask, maps[x])
            if nxt not in parent:
                parent[nxt] = (mask, x)
                queue.append(nxt)
    return None


def greedy_upper_bound(dfa: Dfa) -> Optional[Tuple[int, Word]]:
    """A reset word from repeatedly merging the closest pair in the image.

    Among pairs of the current image, the one with the shortest merging word
    is chosen, ties going to the lexicographically smallest pair.
    """
    n = dfa.n
    if n == 1:
        return 0, ()
    index, pairs, dist, step = _merge_table(dfa)
    if any(d < 0 for d in dist):
        return None
    delta = dfa.delta
    current = frozenset(range(n))
    word = []
    while len(current) > 1:
        members = sorted(current)
        best = None
        for a, p in enumerate(members):
            for q in members[a + 1:]:
                i = index[(p, q)]
                if best is None or dist[i] < dist[best]:
                    best = i
        p, q = pairs[best]
        merge = []
        while p != q:
            x = step[index[(p, q)]]
            merge.append(x)
            p, q = delta[p][x], delta[q][x]
            if p > q:
                p, q = q, p
        word.extend(merge)
        current = image(dfa, current, merge)
    word = tuple(word)
    assert verify_reset_word(dfa, word)
    return len(word), word


def format_word(word: Sequence[int]) -> str:
    return "".join(LETTER_NAMES[x] for x in word)


def parse_word(text: str) -> Word:
    return tuple(LETTER_NAMES.index(ch) for ch in text.strip())


def parse_automaton(text: str) -> Dfa:
    """Parse the ``n k`` header followed by one transition row per state."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise AutomatonFormatError(f"non-integer token in {line!r}", lineno) from None
    if not rows:
        raise AutomatonFormatError("empty automaton file")
    lineno, header = rows[0]
    if len(header) != 2:
        raise AutomatonFormatError("header must be 'n k'", lineno)
    n, k = header
    if n < 1 or k < 1:
        raise AutomatonFormatError("n and k must be positive", lineno)
    body = rows[1:]
    if len(body) != n:
        last = body[-1][0] if body else lineno
        raise AutomatonFormatError(f"expected {n} transition rows, found {len(body)}", last)
    delta = []
    for lineno, row in body:
        if len(row) != k:
            raise AutomatonFormatError(f"expected {k} targets, found {len(row)}", lineno)
        for t in row:
            if not 0 <= t < n:
                raise AutomatonFormatError(f"target {t} out of range 0..{n - 1}", lineno)
        delta.append(tuple(row))
    return Dfa(tuple(delta))


def format_automaton(dfa: Dfa) -> str:
    lines = [f"{dfa.n} {dfa.k}"]
    lines.extend(" ".join(str(t) for t in row) for row in dfa.delta)
    return "\n".join(lines) + "\n"


def read_automaton(path) -> Dfa:
    with open(path) as fh:
        return parse_automaton(fh.read())


def write_automaton(dfa: Dfa, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_automaton(dfa))
