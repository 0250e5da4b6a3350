"""Exit criteria for the toolkit, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
The Monte Carlo criteria share one desk-profile run (seed 1), produced via
the CLI exactly as a user would; the determinism criterion re-runs it with
eight worker processes and compares the files byte for byte.
"""

import csv
import random

import pytest

from resetword.automaton import brute_force_shortest, cerny, is_synchronizing
from resetword.cli import main
from resetword.encoding import CnfFormula, encode
from resetword.experiment import fit_power_law
from resetword.random_model import gen
from resetword.shortest import shortest_reset_word
from resetword.solver import check_model, solve

from .conftest import ACCEPTANCE_LINES, enumerate_models, random_formula, sync_sample

DETERMINISTIC_FILES = (
    "trials.csv", "summary.csv", "fit.json",
    "fig2_histogram.csv", "fig3_loglog.csv", "fig4_mean.csv", "fig5_ratio.csv",
)


def report(number, name, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="session")
def desk_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk-jobs1")
    code = main(["experiment", "--profile", "desk", "--seed", "1", "--jobs", "1", "--out-dir", str(out)])
    rows = {int(r["n"]): r for r in csv.DictReader(open(out / "summary.csv"))}
    return out, code, rows


def test_1_oracle_equivalence():
    sample = sync_sample(300, [2, 3, 4, 5, 6, 7, 8], seed=1)
    mismatches = [
        dfa for dfa in sample
        if shortest_reset_word(dfa).length != brute_force_shortest(dfa)[0]
    ]
    report(1, "oracle equivalence", not mismatches,
           f"{len(sample) - len(mismatches)}/{len(sample)} automata match subset BFS")


def test_2_encoding_counts():
    rng = random.Random(2)
    bad = []
    for i in range(100):
        n, c = rng.randint(1, 30), rng.randint(0, 40)
        f, _ = encode(gen(n, 2, 2, i), c)
        want = ((c + 1) * n + c, n * (n - 1) // 2 + n * (2 * c + 1), n * n + 6 * c * n)
        if (f.num_vars, f.num_clauses, f.num_literals) != want:
            bad.append((n, c))
    report(2, "encoding count formulas", not bad, f"{100 - len(bad)}/100 (n, c) pairs exact")


def test_3_cerny_series():
    got = {}
    for n in (3, 4, 5, 6):
        dfa = cerny(n)
        got[n] = (shortest_reset_word(dfa).length, brute_force_shortest(dfa)[0])
    ok = all(sat == bfs == (n - 1) ** 2 for n, (sat, bfs) in got.items())
    report(3, "Cerny C_n = (n-1)^2", ok, ", ".join(f"C{n}: {s}" for n, (s, _) in got.items()))


def test_4_mean_length_n50(desk_run):
    out, code, rows = desk_run
    row = rows[50]
    mean, trials = float(row["mean"]), int(row["trials"])
    target = 1.95 * 50 ** 0.55
    ok = trials >= 200 and abs(mean - 16.8) <= 0.10 * 16.8 and int(row["budget_exceeded"]) == 0
    report(4, "mean length at n=50", ok,
           f"mean {mean:.3f} over {row['sync_count']} sync of {trials} trials (target 16.8 +-10%, 1.95*50^0.55={target:.3f})")


def test_5_power_law_exponent(desk_run):
    out, code, rows = desk_run
    sizes = (20, 25, 30, 35, 40, 45, 50)
    assert all(int(rows[n]["trials"]) >= 200 for n in sizes)
    fit = fit_power_law([(n, float(rows[n]["mean"])) for n in sizes], n_min=20)
    ok = 0.50 <= fit.slope <= 0.60 and fit.points_used == len(sizes)
    report(5, "power-law exponent", ok,
           f"slope {fit.slope:.4f}, intercept {fit.intercept:.4f}, coefficient {fit.coefficient:.4f} (need slope in [0.50, 0.60])")


def test_6_sync_fraction(desk_run):
    out, code, rows = desk_run
    frac50 = float(rows[50]["sync_fraction"])
    # only the pair-graph test is needed for the fraction, so n=100 is cheap
    frac100 = sum(is_synchronizing(gen(100, 2, 1, i)) for i in range(100)) / 100
    ok = frac50 >= 0.90 and frac100 >= 0.95
    report(6, "synchronizing fraction", ok, f"n=50: {frac50:.3f} (>= 0.90), n=100: {frac100:.3f} (>= 0.95)")


def test_7_concentration_trend(desk_run):
    out, code, rows = desk_run
    r10, r50 = float(rows[10]["ratio"]), float(rows[50]["ratio"])
    ok = int(rows[10]["trials"]) >= 200 and r50 < r10
    report(7, "sqrt(d)/r decreases", ok, f"n=10: {r10:.4f}, n=50: {r50:.4f}")


def test_8_solver_soundness():
    rng = random.Random(8)
    disagreements = sat_count = 0
    for _ in range(1000):
        num_vars, clauses = random_formula(rng, max_vars=20)
        f = CnfFormula(num_vars, tuple(clauses))
        models = enumerate_models(num_vars, clauses)
        result = solve(f)
        if result.sat:
            sat_count += 1
            if not (models and check_model(f, result.model)):
                disagreements += 1
        elif models:
            disagreements += 1
    report(8, "solver vs enumeration", disagreements == 0,
           f"1000 formulas ({sat_count} SAT), {disagreements} disagreements")


def test_9_determinism_across_jobs(desk_run, tmp_path):
    out1, code1, _ = desk_run
    out8 = tmp_path / "desk-jobs8"
    code8 = main(["experiment", "--profile", "desk", "--seed", "1", "--jobs", "8", "--out-dir", str(out8)])
    differing = [
        name for name in DETERMINISTIC_FILES
        if (out1 / name).read_bytes() != (out8 / name).read_bytes()
    ]
    ok = code1 == code8 == 0 and not differing
    report(9, "determinism --jobs 1 vs 8", ok,
           f"{len(DETERMINISTIC_FILES) - len(differing)}/{len(DETERMINISTIC_FILES)} files identical, exit codes {code1}/{code8}")
