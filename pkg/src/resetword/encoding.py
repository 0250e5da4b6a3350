"""CNF encoding of "a 2-letter DFA has a reset word of length exactly c".

Variables:

* ``u_t`` for ``t = 1..c``: letter ``t`` of the word is ``a`` when true,
  ``b`` when false.
* ``x_{q,t}`` for ``q = 0..n-1``, ``t = 0..c``: state ``q`` may be occupied
  after the first ``t`` letters. Truth is forced upward only.

Clauses, in emission order:

1. ``x_{q,0}`` for every state.
2. ``x_{q,t} & u_{t+1} -> x_{qa,t+1}`` and ``x_{q,t} & ~u_{t+1} -> x_{qb,t+1}``.
3. ``~x_{q,c} | ~x_{p,c}`` for every pair ``p < q``.

Literals are DIMACS-style signed integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Tuple

from .automaton import Dfa, Word

Clause = Tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} outside 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def num_literals(self) -> int:
        return sum(len(c) for c in self.clauses)


@dataclass(frozen=True)
class VarMap:
    n: int
    c: int

    @property
    def num_vars(self) -> int:
        return (self.c + 1) * self.n + self.c

    def u(self, t: int) -> int:
        if not 1 <= t <= self.c:
            raise IndexError(f"u_{t} outside 1..{self.c}")
        return t

    def x(self, q: int, t: int) -> int:
        if not (0 <= q < self.n and 0 <= t <= self.c):
            raise IndexError(f"x_({q},{t}) out of range")
        return self.c + t * self.n + q + 1

    def meaning(self, var: int) -> Tuple:
        """Inverse map: ``('u', t)`` or ``('x', q, t)``."""
        if 1 <= var <= self.c:
            return ("u", var)
        if self.c < var <= self.num_vars:
            t, q = divmod(var - self.c - 1, self.n)
            return ("x", q, t)
        raise IndexError(f"variable {var} not in this map")


def encode(dfa: Dfa, c: int) -> Tuple[CnfFormula, VarMap]:
    if dfa.k != 2:
        raise ValueError(f"encoding needs a 2-letter alphabet, got k={dfa.k}")
    if c < 0:
        raise ValueError("word length must be non-negative")
    n, delta = dfa.n, dfa.delta
    vm = VarMap(n, c)
    x = vm.x
    clauses = [(x(q, 0),) for q in range(n)]
    for t in range(c):
        u = vm.u(t + 1)
        for q in range(n):
            xq = x(q, t)
            clauses.append((-xq, -u, x(delta[q][0], t + 1)))
            clauses.append((-xq, u, x(delta[q][1], t + 1)))
    for p in range(n):
        for q in range(p + 1, n):
            clauses.append((-x(q, c), -x(p, c)))
    return CnfFormula(vm.num_vars, tuple(clauses)), vm


def decode_word(assignment: Mapping[int, bool], vm: VarMap) -> Word:
    return tuple(0 if assignment[vm.u(t)] else 1 for t in range(1, vm.c + 1))


def to_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in formula.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Read DIMACS CNF; clauses may span lines, comments start with ``c``."""
    num_vars = num_clauses = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise ValueError("missing problem line")
    if len(clauses) != num_clauses:
        raise ValueError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))
