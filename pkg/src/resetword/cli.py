"""Command-line interface.

Exit codes, shared by every subcommand:

* 0 -- success / positive verdict
* 1 -- negative verdict (e.g. the automaton is not synchronizing)
* 2 -- bad input (unparseable file, unsupported alphabet, bad flags)
* 3 -- a solver budget ran out
"""

import argparse
import json
import os
import sys

from . import automaton as am
from .encoding import encode, to_dimacs
from .experiment import (
    DEFAULT_BUDGET,
    PROFILES,
    fit_power_law,
    read_summary_csv,
    read_trials_csv,
    run_experiment,
    summarize_all,
)
from .random_model import gen
from .shortest import shortest_reset_word
from .solver import BudgetExceeded, CdclSolver, ExternalSolver, SolverError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return am.parse_automaton(text)
    except am.AutomatonFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_check(args):
    dfa = _load(args.automaton)
    ok = am.is_synchronizing(dfa)
    print(f"synchronizing: {'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _solver(args):
    if args.solver == "external":
        if not args.solver_cmd:
            raise InputError("--solver external requires --solver-cmd")
        return ExternalSolver(args.solver_cmd)
    return CdclSolver(args.solver_seed)


def cmd_shortest(args):
    dfa = _load(args.automaton)
    if dfa.k != 2:
        raise InputError(f"shortest needs a 2-letter automaton, got k={dfa.k}")
    if not am.is_synchronizing(dfa):
        print("automaton is not synchronizing", file=sys.stderr)
        return EXIT_NEGATIVE
    result = shortest_reset_word(dfa, _solver(args), args.budget, fig1_exact=args.fig1_exact, check=False)
    word = am.format_word(result.word)
    if args.json:
        print(json.dumps({
            "length": result.length,
            "word": word,
            "initial_upper": result.initial_upper,
            "queries": [
                {"c": p.c, "sat": p.sat, "conflicts": p.conflicts, "seconds": round(p.seconds, 6)}
                for p in result.probes
            ],
        }, indent=2))
    else:
        print(f"length: {result.length}")
        print(f"word: {word}")
        for p in result.probes:
            print(f"query c={p.c} {'SAT' if p.sat else 'UNSAT'} conflicts={p.conflicts} time={p.seconds:.3f}s")
    return EXIT_OK


def cmd_encode(args):
    dfa = _load(args.automaton)
    if dfa.k != 2:
        raise InputError(f"encoding needs a 2-letter automaton, got k={dfa.k}")
    if args.c < 0:
        raise InputError("c must be non-negative")
    formula, _ = encode(dfa, args.c)
    sys.stdout.write(to_dimacs(formula))
    return EXIT_OK


def cmd_gen(args):
    if args.n < 1 or args.k < 1:
        raise InputError("--n and --k must be positive")
    text = am.format_automaton(gen(args.n, args.k, args.seed, args.trial))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args):
    dfa = _load(args.automaton)
    try:
        found = am.brute_force_shortest(dfa, args.max_states)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if found is None:
        print("automaton is not synchronizing", file=sys.stderr)
        return EXIT_NEGATIVE
    length, word = found
    print(length)
    if args.word:
        print(am.format_word(word))
    return EXIT_OK


def cmd_experiment(args):
    if args.profile not in PROFILES and not os.path.isfile(args.profile):
        raise InputError(f"unknown profile {args.profile!r} (not a name in {sorted(PROFILES)} or a file)")

    def progress(rec):
        if args.verbose:
            print(f"n={rec.n} trial={rec.trial_index} length={rec.length} status={rec.status}",
                  file=sys.stderr)

    try:
        records, summaries, fit = run_experiment(
            args.profile, args.seed, args.out_dir, args.budget, args.jobs, args.n_min, progress
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for s in summaries:
        mean = "-" if s.mean is None else f"{s.mean:.3f}"
        print(f"n={s.n} trials={s.trials} sync={s.sync_fraction:.3f} mean={mean}")
    if fit:
        print(f"fit: ln(r) = {fit.slope:.4f} ln(n) + {fit.intercept:.4f}  (r = {fit.coefficient:.4f} n^{fit.slope:.4f})")
    failed = sum(s.budget_exceeded for s in summaries)
    if failed:
        print(f"budget exceeded in {failed} trials", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_fit(args):
    path = args.path
    if os.path.isdir(path):
        path = os.path.join(path, "summary.csv")
    try:
        text = open(path).read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    header = text.split("\n", 1)[0]
    try:
        if header.startswith("n,trial_index"):
            points = [(s.n, s.mean) for s in summarize_all(read_trials_csv(text))]
        else:
            points = read_summary_csv(text)
        fit = fit_power_law(points, args.n_min)
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if args.json:
        print(json.dumps({
            "slope": fit.slope, "intercept": fit.intercept, "coefficient": fit.coefficient,
            "n_min": fit.n_min, "points_used": fit.points_used, "rss": fit.rss,
        }, indent=2))
    else:
        print(f"slope: {fit.slope:.6f}")
        print(f"intercept: {fit.intercept:.6f}")
        print(f"coefficient: {fit.coefficient:.6f}")
        print(f"points: {fit.points_used}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="resetword", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether an automaton is synchronizing")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("shortest", help="exact shortest reset word by SAT binary search")
    p.add_argument("automaton")
    p.add_argument("--solver", choices=["internal", "external"], default="internal")
    p.add_argument("--solver-cmd", help="external solver command; the CNF path is appended")
    p.add_argument("--solver-seed", type=int, default=0)
    p.add_argument("--fig1-exact", action="store_true", help="start the search at n**3 instead of the greedy bound")
    p.add_argument("--budget", type=int, default=None, help="conflict limit per SAT query")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_shortest)

    p = sub.add_parser("encode", help="print the length-c CNF in DIMACS")
    p.add_argument("automaton")
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("gen", help="sample a uniform random automaton")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="shortest reset word length by subset BFS")
    p.add_argument("automaton")
    p.add_argument("--max-states", type=int, default=am.BRUTE_FORCE_MAX_STATES)
    p.add_argument("--word", action="store_true", help="also print a witness word")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="Monte Carlo study over random automata")
    p.add_argument("--profile", default="desk", help="paper, desk, or a file of 'n trials' lines")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="conflict limit per SAT query")
    p.add_argument("--n-min", type=int, default=20)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("fit", help="power-law fit of mean length against n")
    p.add_argument("path", help="summary.csv, trials.csv, or an experiment output directory")
    p.add_argument("--n-min", type=float, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
