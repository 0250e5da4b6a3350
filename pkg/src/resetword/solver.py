"""Complete SAT solving for :class:`~resetword.encoding.CnfFormula`.

The default backend is the in-repo CDCL search in :mod:`resetword._cdcl`
(watched literals, VSIDS decisions with phase saving starting from false,
first-UIP learning with recursive minimisation, Luby restarts, LBD-based
clause deletion). An external SAT-competition style solver can be plugged
in through :class:`ExternalSolver`.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from . import _cdcl
from .encoding import CnfFormula, to_dimacs

Assignment = Dict[int, bool]


class BudgetExceeded(RuntimeError):
    """The conflict budget ran out before a verdict was reached."""

    def __init__(self, conflicts: int):
        super().__init__(f"conflict budget exhausted after {conflicts} conflicts")
        self.conflicts = conflicts


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: Optional[Assignment] = field(default=None, repr=False)
    conflicts: int = 0

    def __bool__(self):
        return self.sat


def check_model(formula: CnfFormula, assignment: Assignment) -> bool:
    for clause in formula.clauses:
        for lit in clause:
            if assignment[abs(lit)] == (lit > 0):
                break
        else:
            return False
    return True


def _prepare(formula: CnfFormula):
    """Flatten to kernel literals, dropping tautologies and duplicate literals.

    Returns ``None`` if an empty clause makes the formula trivially UNSAT.
    """
    flat, starts = [], [0]
    for clause in formula.clauses:
        lits = set(clause)
        if any(-lit in lits for lit in lits):
            continue
        if not lits:
            return None
        for lit in sorted(lits, key=clause.index):
            flat.append(2 * (lit - 1) if lit > 0 else 2 * (-lit - 1) + 1)
        starts.append(len(flat))
    return np.asarray(flat, dtype=np.int64), np.asarray(starts, dtype=np.int64)


class CdclSolver:
    """In-process CDCL solver.

    ``seed`` perturbs the initial variable order; ``seed=0`` uses the
    natural order. Either way the run is deterministic.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed

    def solve(self, formula: CnfFormula, budget: Optional[int] = None) -> SolveResult:
        nv = formula.num_vars
        prepared = _prepare(formula)
        if prepared is None:
            return SolveResult(False)
        flat, starts = prepared
        if self.seed:
            init_act = np.random.default_rng(self.seed).random(nv) * 1e-3
        else:
            init_act = np.zeros(nv)
        limit = -1 if budget is None else int(budget)
        status, values, conflicts = _cdcl.solve_kernel(nv, flat, starts, init_act, limit)
        if status == _cdcl.UNKNOWN:
            raise BudgetExceeded(int(conflicts))
        if status == _cdcl.UNSAT:
            return SolveResult(False, conflicts=int(conflicts))
        model = {v + 1: bool(values[v]) for v in range(nv)}
        if not check_model(formula, model):
            raise SolverError("solver produced an assignment that violates the formula")
        return SolveResult(True, model, int(conflicts))


def parse_competition_output(text: str, num_vars: int) -> SolveResult:
    """Parse ``s SATISFIABLE`` / ``v ...`` output; unset variables default to false."""
    status = None
    values: Assignment = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = True
            elif word == "UNSATISFIABLE":
                status = False
            else:
                status = word
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit:
                    values[abs(lit)] = lit > 0
    if status is True:
        model = {v: values.get(v, False) for v in range(1, num_vars + 1)}
        return SolveResult(True, model)
    if status is False:
        return SolveResult(False)
    raise SolverError(f"external solver gave no verdict (status line: {status!r})")


class ExternalSolver:
    """Run a command as ``<cmd> <file.cnf>`` and read competition-format stdout."""

    def __init__(self, command: str, timeout: Optional[float] = None):
        self.argv = shlex.split(command)
        if not self.argv:
            raise ValueError("empty solver command")
        self.timeout = timeout

    def solve(self, formula: CnfFormula, budget: Optional[int] = None) -> SolveResult:
        fd, path = tempfile.mkstemp(suffix=".cnf")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(to_dimacs(formula))
            try:
                proc = subprocess.run(
                    self.argv + [path], capture_output=True, text=True, timeout=self.timeout
                )
            except subprocess.TimeoutExpired:
                raise BudgetExceeded(0) from None
        finally:
            os.unlink(path)
        result = parse_competition_output(proc.stdout, formula.num_vars)
        if result.sat and not check_model(formula, result.model):
            raise SolverError("external solver model violates the formula")
        return result


def solve(formula: CnfFormula, budget: Optional[int] = None, seed: int = 0) -> SolveResult:
    """Decide ``formula``. Raises :class:`BudgetExceeded` past ``budget`` conflicts."""
    return CdclSolver(seed).solve(formula, budget)
