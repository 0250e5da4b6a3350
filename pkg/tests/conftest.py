import random
import sys
import textwrap

import numpy as np
import pytest

from resetword.automaton import Dfa, cerny, is_synchronizing
from resetword.random_model import gen


def constant_dfa(n, target=0):
    return Dfa.from_letter_maps([target] * n, [target] * n)


def permutation_dfa(n):
    """Both letters permute the states, so no pair is ever merged."""
    return Dfa.from_letter_maps([(q + 1) % n for q in range(n)], [(q - 1) % n for q in range(n)])


def sync_sample(count, n_values, seed):
    """Seeded synchronizing random automata, cycling through ``n_values``."""
    out, i = [], 0
    while len(out) < count:
        n = n_values[i % len(n_values)]
        dfa = gen(n, 2, seed, i)
        if is_synchronizing(dfa):
            out.append(dfa)
        i += 1
    return out


def enumerate_models(num_vars, clauses):
    """Exhaustive oracle: bitmask of satisfying assignments over 2**num_vars points.

    Bit ``i`` of the result is set iff the assignment whose variable ``v``
    equals bit ``v-1`` of ``i`` satisfies every clause.
    """
    size = 1 << num_vars
    full = (1 << size) - 1
    idx = np.arange(size, dtype=np.int64)
    pos = []
    for v in range(num_vars):
        bits = np.packbits(((idx >> v) & 1).astype(np.uint8), bitorder="little")
        pos.append(int.from_bytes(bits.tobytes(), "little") & full)
    result = full
    for clause in clauses:
        mask = 0
        for lit in clause:
            m = pos[abs(lit) - 1]
            mask |= m if lit > 0 else full ^ m
        result &= mask
        if not result:
            break
    return result


def random_formula(rng, max_vars=20):
    num_vars = rng.randint(1, max_vars)
    ratio = rng.uniform(1.0, 6.0)
    clauses = []
    for _ in range(max(1, int(ratio * num_vars))):
        width = rng.choice((1, 2, 2, 3, 3, 3, 3, 4)) if num_vars > 1 else 1
        width = min(width, num_vars)
        vars_ = rng.sample(range(1, num_vars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vars_))
    return num_vars, clauses


@pytest.fixture
def c4():
    return cerny(4)


@pytest.fixture
def rng():
    return random.Random(20240607)


FAKE_SOLVER = textwrap.dedent(
    """
    import itertools, sys
    clauses, nv = [], 0
    for line in open(sys.argv[1]):
        if line.startswith("p"):
            nv = int(line.split()[2])
        elif line.strip():
            clauses.append([int(t) for t in line.split()[:-1]])
    for bits in itertools.product([False, True], repeat=nv):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            print("s SATISFIABLE")
            print("v " + " ".join(str(i + 1 if b else -(i + 1)) for i, b in enumerate(bits)) + " 0")
            break
    else:
        print("s UNSATISFIABLE")
    """
)


@pytest.fixture
def fake_solver(tmp_path):
    script = tmp_path / "fake_solver.py"
    script.write_text(FAKE_SOLVER)
    return f"{sys.executable} {script}"


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
