"""Monte Carlo runs over uniform random 2-letter automata.

For every ``(n, trial_index)`` an automaton is drawn, tested for
synchronizability, and (when synchronizing) its exact shortest reset word
length is computed. Per-size statistics cover the synchronizing fraction,
mean and sample variance of the length, and the ratio sqrt(variance)/mean;
the size-to-mean relation is fitted as a power law in log-log space.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import metadata
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .automaton import format_word, is_synchronizing
from .random_model import gen, trial_key
from .shortest import shortest_reset_word
from .solver import BudgetExceeded, CdclSolver

Profile = List[Tuple[int, int]]

DEFAULT_BUDGET = 1_000_000

PROFILES: Dict[str, Profile] = {
    # trial counts used for the published study
    "paper": (
        [(n, 2000) for n in range(1, 21)]
        + [(n, 2000) for n in range(25, 51, 5)]
        + [(n, 500) for n in range(55, 71, 5)]
        + [(n, 200) for n in range(75, 101, 5)]
    ),
    # 200 trials per size up to n=50; minutes on one core
    "desk": [(n, 200) for n in (2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35, 40, 45, 50)],
}

OK = "ok"
BUDGET_EXCEEDED = "budget_exceeded"

TRIAL_COLUMNS = ["n", "trial_index", "seed", "synchronizing", "length", "word", "sat_queries", "status"]
TIMING_COLUMNS = ["n", "trial_index", "solve_time"]
SUMMARY_COLUMNS = [
    "n", "trials", "sync_count", "sync_fraction", "mean", "variance", "ratio", "budget_exceeded",
]
FLOAT_FORMAT = "{:.6f}"


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial_index: int
    seed: int
    synchronizing: bool
    length: Optional[int]
    word: str = ""
    solve_time: float = field(default=0.0, compare=False)
    sat_queries: int = 0
    status: str = OK


@dataclass(frozen=True)
class SizeSummary:
    n: int
    trials: int
    sync_count: int
    sync_fraction: float
    mean: Optional[float]
    variance: Optional[float]
    ratio: Optional[float]
    histogram: Dict[int, int]
    budget_exceeded: int = 0


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    coefficient: float
    n_min: float
    points_used: int
    rss: float


def load_profile(spec: str) -> Profile:
    """A named profile, or a file of ``n trials`` lines (``#`` comments)."""
    if spec in PROFILES:
        return list(PROFILES[spec])
    profile = []
    with open(spec) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{spec}:{lineno}: expected 'n trials'")
            n, count = int(parts[0]), int(parts[1])
            if n < 1 or count < 1:
                raise ValueError(f"{spec}:{lineno}: n and trials must be positive")
            profile.append((n, count))
    return profile


def run_trial(n: int, trial_index: int, seed: int, budget: Optional[int] = DEFAULT_BUDGET) -> TrialRecord:
    dfa = gen(n, 2, seed, trial_index)
    key = trial_key(seed, n, trial_index)
    start = time.perf_counter()
    if not is_synchronizing(dfa):
        return TrialRecord(n, trial_index, key, False, None, solve_time=time.perf_counter() - start)
    try:
        result = shortest_reset_word(dfa, CdclSolver(), budget, check=False)
    except BudgetExceeded:
        return TrialRecord(
            n, trial_index, key, True, None,
            solve_time=time.perf_counter() - start, status=BUDGET_EXCEEDED,
        )
    return TrialRecord(
        n, trial_index, key, True, result.length, format_word(result.word),
        time.perf_counter() - start, result.queries,
    )


def _run_task(task):
    return run_trial(*task)


def run_trials(
    profile: Sequence[Tuple[int, int]],
    seed: int,
    budget: Optional[int] = DEFAULT_BUDGET,
    jobs: int = 1,
    progress=None,
) -> List[TrialRecord]:
    """Run every trial of ``profile``; output is ordered by ``(n, trial_index)``.

    ``progress``, if given, is called with each finished record.
    """
    tasks = []
    for n, count in profile:
        if count < 1:
            raise ValueError(f"trial count for n={n} must be >= 1")
        tasks.extend((n, i, seed, budget) for i in range(count))
    records = []
    if jobs <= 1:
        for task in tasks:
            records.append(_run_task(task))
            if progress:
                progress(records[-1])
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_run_task, tasks, chunksize=4):
                records.append(rec)
                if progress:
                    progress(rec)
    records.sort(key=lambda r: (r.n, r.trial_index))
    return records


def sample_stats(samples: Sequence[float]) -> Tuple[float, float, float]:
    """Mean, Bessel-corrected variance and sqrt(variance)/mean."""
    if len(samples) < 2:
        raise InsufficientDataError("variance needs at least two samples")
    mean = math.fsum(samples) / len(samples)
    var = math.fsum((x - mean) ** 2 for x in samples) / (len(samples) - 1)
    ratio = math.sqrt(var) / mean if mean > 0 else math.nan
    return mean, var, ratio


def summarize(records: Sequence[TrialRecord]) -> SizeSummary:
    """Statistics for the records of a single ``n``.

    Non-synchronizing trials count towards the fraction only; budget
    failures are excluded everywhere except their own counter. ``mean`` is
    ``None`` without samples, ``variance``/``ratio`` need two samples and a
    positive mean.
    """
    if not records:
        raise InsufficientDataError("no records")
    sizes = {r.n for r in records}
    if len(sizes) != 1:
        raise ValueError(f"records span several sizes: {sorted(sizes)}")
    failed = sum(r.status != OK for r in records)
    sync = sum(r.synchronizing for r in records)
    samples = [r.length for r in records if r.synchronizing and r.status == OK]
    mean = variance = ratio = None
    if samples:
        mean = math.fsum(samples) / len(samples)
    if len(samples) >= 2:
        mean, variance, ratio = sample_stats(samples)
        if math.isnan(ratio):
            ratio = None
    histogram: Dict[int, int] = {}
    for s in sorted(samples):
        histogram[s] = histogram.get(s, 0) + 1
    return SizeSummary(
        records[0].n, len(records), sync, sync / len(records),
        mean, variance, ratio, histogram, failed,
    )


def summarize_all(records: Iterable[TrialRecord]) -> List[SizeSummary]:
    groups: Dict[int, List[TrialRecord]] = {}
    for r in records:
        groups.setdefault(r.n, []).append(r)
    return [summarize(groups[n]) for n in sorted(groups)]


def fit_power_law(points: Iterable[Tuple[float, float]], n_min: float = 20) -> FitResult:
    """Least squares of ``ln(mean)`` on ``ln(n)`` over points with ``n >= n_min``."""
    used = sorted((float(n), float(r)) for n, r in points if n >= n_min and r is not None)
    if len(used) < 2 or len({n for n, _ in used}) < 2:
        raise InsufficientDataError(f"need two distinct sizes with n >= {n_min}")
    if any(r <= 0 for _, r in used):
        raise ValueError("means must be positive for a log-log fit")
    x = np.log([n for n, _ in used])
    y = np.log([r for _, r in used])
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    rss = float(np.sum((y - (slope * x + intercept)) ** 2))
    return FitResult(float(slope), float(intercept), math.exp(intercept), n_min, len(used), rss)


# ---------------------------------------------------------------- emission

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return FLOAT_FORMAT.format(x)
    return str(x)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def trials_csv(records: Sequence[TrialRecord]) -> str:
    return _csv_text(TRIAL_COLUMNS, (
        (r.n, r.trial_index, r.seed, r.synchronizing, r.length, r.word, r.sat_queries, r.status)
        for r in records
    ))


def read_trials_csv(text: str) -> List[TrialRecord]:
    records = []
    for row in csv.DictReader(io.StringIO(text)):
        records.append(TrialRecord(
            n=int(row["n"]),
            trial_index=int(row["trial_index"]),
            seed=int(row["seed"]),
            synchronizing=row["synchronizing"] == "1",
            length=int(row["length"]) if row["length"] else None,
            word=row["word"],
            sat_queries=int(row["sat_queries"]),
            status=row["status"],
        ))
    return records


def summary_csv(summaries: Sequence[SizeSummary]) -> str:
    return _csv_text(SUMMARY_COLUMNS, (
        (s.n, s.trials, s.sync_count, s.sync_fraction, s.mean, s.variance, s.ratio, s.budget_exceeded)
        for s in summaries
    ))


def read_summary_csv(text: str) -> List[Tuple[int, Optional[float]]]:
    """``(n, mean)`` pairs from a summary CSV, enough to refit."""
    return [
        (int(row["n"]), float(row["mean"]) if row["mean"] else None)
        for row in csv.DictReader(io.StringIO(text))
    ]


def _package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def emit(
    out_dir: str,
    records: Sequence[TrialRecord],
    summaries: Optional[Sequence[SizeSummary]] = None,
    fit: Optional[FitResult] = None,
    run_info: Optional[dict] = None,
) -> Dict[str, str]:
    """Write CSV/JSON results and plot data into ``out_dir``; returns name -> path.

    Everything except ``timings.csv`` is a deterministic function of the inputs.
    """
    if summaries is None:
        summaries = summarize_all(records)
    os.makedirs(out_dir, exist_ok=True)
    files: Dict[str, str] = {}

    def put(name, text):
        path = os.path.join(out_dir, name)
        try:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        files[name] = path

    put("trials.csv", trials_csv(records))
    put("timings.csv", _csv_text(TIMING_COLUMNS, ((r.n, r.trial_index, r.solve_time) for r in records)))
    put("summary.csv", summary_csv(summaries))

    hist_rows = []
    for s in summaries:
        mass = sum(s.histogram.values())
        for length, count in s.histogram.items():
            hist_rows.append((s.n, length, count, count / mass))
    put("fig2_histogram.csv", _csv_text(["n", "length", "count", "probability"], hist_rows))

    with_mean = [s for s in summaries if s.mean is not None and s.mean > 0]
    put("fig3_loglog.csv", _csv_text(
        ["n", "log_n", "log_mean"],
        ((s.n, math.log(s.n), math.log(s.mean)) for s in with_mean),
    ))
    put("fig4_mean.csv", _csv_text(
        ["n", "mean", "fitted"],
        ((s.n, s.mean, fit.coefficient * s.n ** fit.slope if fit else None)
         for s in summaries if s.mean is not None),
    ))
    put("fig5_ratio.csv", _csv_text(
        ["n", "ratio"], ((s.n, s.ratio) for s in summaries if s.ratio is not None),
    ))

    doc = {
        "fit": None if fit is None else {
            k: (round(v, 6) if isinstance(v, float) else v) for k, v in asdict(fit).items()
        },
        "run": dict(run_info or {}),
        "budget_exceeded": sum(s.budget_exceeded for s in summaries),
        "version": _package_version(),
    }
    put("fit.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return files


def run_experiment(
    profile_name: str,
    seed: int,
    out_dir: str,
    budget: Optional[int] = DEFAULT_BUDGET,
    jobs: int = 1,
    n_min: int = 20,
    progress=None,
):
    """Trials, summaries, fit and emission in one go. Returns ``(records, summaries, fit)``."""
    profile = load_profile(profile_name)
    records = run_trials(profile, seed, budget, jobs, progress)
    summaries = summarize_all(records)
    try:
        fit = fit_power_law(((s.n, s.mean) for s in summaries), n_min)
    except InsufficientDataError:
        fit = None
    info = {
        "profile": profile_name if profile_name in PROFILES else os.path.basename(profile_name),
        "sizes": [list(p) for p in profile],
        "seed": seed,
        "budget": budget,
        "n_min": n_min,
    }
    emit(out_dir, records, summaries, fit, info)
    return records, summaries, fit
