"""Experiment orchestration: proposed vs. random vs. no reduction.

Each trial trains on one 100-sample block of the generated data and is
scored by test-set MAE. Per-trial randomness comes from
``numpy.random.SeedSequence(master_seed, spawn_key=...)`` so results do not
depend on execution order.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import annealer
from .annealer import AnnealSchedule, anneal
from .datagen import GeneratorConfig, generate, trial_splits
from .encoding import DEFAULT_BASIS, BasisVector, decode, full_plan, reduce_plan
from .errors import PairingError
from .gibbs_sampler import SamplerConfig, correlation_matrix, sample_chain, select_pairs
from .qubo_core import QuboProblem
from .regression import RegressionDataset, build_qubo, mae

log = logging.getLogger(__name__)

METHODS = ("proposed", "random", "none")
_METHOD_CODE = {"proposed": 0, "random": 1, "none": 2}
_STREAM_SAMPLER, _STREAM_RANDOM_PAIRS, _STREAM_ANNEAL = 0, 1, 2

RESULT_COLUMNS = ("method", "cut", "trial", "n_bits", "pairs", "mae", "energy", "seconds", "seed")


@dataclass(frozen=True)
class ExperimentConfig:
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    basis: BasisVector = DEFAULT_BASIS
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)
    threshold: float = 0.8
    cut_values: tuple = tuple(range(11))
    methods: tuple = METHODS
    n_trials: int = 10
    master_seed: int = 0

    def __post_init__(self):
        K = len(self.basis)
        if any(not 0 <= c <= K for c in self.cut_values):
            raise ValueError(f"cut values must lie in 0..{K}")
        if not 0 < self.threshold <= 1:
            raise ValueError("threshold must lie in (0, 1]")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        if self.n_trials * self.generator.train_size > self.generator.n_total:
            raise ValueError("n_trials training blocks do not fit in n_total samples")


@dataclass(frozen=True)
class TrialReport:
    method: str
    cut: int
    trial: int
    n_bits: int
    pairs: tuple
    mae: float
    energy: float
    seconds: float
    seed: int


def _stream(cfg: ExperimentConfig, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(cfg.master_seed, spawn_key=key)


def random_pairs(D: int, p: int, seed) -> list[tuple[int, int]]:
    """``p`` disjoint pairs, uniform over all sets of ``p`` disjoint pairs.

    A uniform permutation cut into consecutive pairs hits every such set
    with the same multiplicity ``p! 2**p (D - 2p)!``.
    """
    if p < 0 or 2 * p > D:
        raise PairingError(f"cannot draw {p} disjoint pairs from {D} variables")
    perm = np.random.default_rng(seed).permutation(D)
    return sorted((int(min(a, b)), int(max(a, b))) for a, b in perm[: 2 * p].reshape(p, 2))


def proposed_pairs(cfg: ExperimentConfig, train: RegressionDataset, trial_index: int):
    """Correlation-selected pairs for one trial; independent of the cut value."""
    samples = sample_chain(train, cfg.sampler, seed=_stream(cfg, _STREAM_SAMPLER, trial_index))
    return select_pairs(correlation_matrix(samples), cfg.threshold)


def trial_pairs(cfg: ExperimentConfig, method: str, train: RegressionDataset,
                trial_index: int) -> list[tuple[int, int]]:
    if method == "none":
        return []
    selected = [pair for pair, _ in proposed_pairs(cfg, train, trial_index)]
    if method == "proposed":
        return selected
    return random_pairs(train.D, len(selected), _stream(cfg, _STREAM_RANDOM_PAIRS, trial_index))


def run_trial(cfg: ExperimentConfig, method: str, c: int, trial_index: int,
              data: RegressionDataset | None = None) -> TrialReport:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    data = generate(cfg.generator) if data is None else data
    train_idx, test_idx = trial_splits(data, cfg.generator.train_size, cfg.n_trials)[trial_index]
    train, test = data.subset(train_idx), data.subset(test_idx)

    pairs = trial_pairs(cfg, method, train, trial_index)
    plan = reduce_plan(full_plan(train.D, cfg.basis), pairs, c)
    qubo = build_qubo(train, plan)

    seed = int(_stream(cfg, _STREAM_ANNEAL, _METHOD_CODE[method], c, trial_index).generate_state(1)[0])
    sched = AnnealSchedule(cfg.schedule.iterations, cfg.schedule.t0, cfg.schedule.gamma, seed)
    result = anneal(qubo, sched)
    w = decode(plan, result.best_z)
    return TrialReport(
        method=method,
        cut=c,
        trial=trial_index,
        n_bits=qubo.n,
        pairs=tuple(pairs),
        mae=mae(w, test),
        energy=result.best_energy,
        seconds=result.wall_time,
        seed=seed,
    )


def _job(args):
    cfg, method, c, trial = args
    try:
        return run_trial(cfg, method, c, trial)
    except Exception as exc:
        raise RuntimeError(f"trial failed (method={method}, cut={c}, trial={trial}): {exc}") from exc


def _warm_up() -> None:
    # untimed run so first-trial timings exclude one-off start-up costs
    annealer.anneal(QuboProblem(np.eye(16)), AnnealSchedule(2_000, 1.0, 0.999))


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[TrialReport]:
    """Run every (method, cut, trial) combination; any failure aborts the run.

    Jobs run trial-major so slow periods on the host spread across cuts
    instead of biasing one of them. Reports come back in canonical order.
    """
    jobs = [(cfg, m, c, t) for t in range(cfg.n_trials) for m in cfg.methods for c in cfg.cut_values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_warm_up) as pool:
            reports = list(pool.map(_job, jobs))
    else:
        _warm_up()
        reports = []
        for job in jobs:
            reports.append(_job(job))
            r = reports[-1]
            log.info("%s cut=%d trial=%d n_bits=%d mae=%.4f %.2fs",
                     r.method, r.cut, r.trial, r.n_bits, r.mae, r.seconds)
    order = {m: i for i, m in enumerate(METHODS)}
    return sorted(reports, key=lambda r: (order[r.method], r.cut, r.trial))


def format_pairs(pairs) -> str:
    return ";".join(f"{a}-{b}" for a, b in pairs)


def write_results(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for r in reports:
            writer.writerow([r.method, r.cut, r.trial, r.n_bits, format_pairs(r.pairs),
                             repr(r.mae), repr(r.energy), repr(r.seconds), r.seed])


def read_results(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def summarize(reports) -> list[dict]:
    """Mean and population standard deviation per (method, cut)."""
    groups: dict[tuple, list[TrialReport]] = {}
    for r in reports:
        groups.setdefault((r.method, r.cut), []).append(r)
    rows = []
    for (method, cut), items in groups.items():
        row = {"method": method, "cut": cut, "trials": len(items)}
        for name in ("n_bits", "mae", "seconds"):
            vals = np.array([getattr(r, name) for r in items], dtype=np.float64)
            row[f"{name}_mean"] = float(vals.mean())
            row[f"{name}_std"] = float(vals.std())
        rows.append(row)
    return rows


SUMMARY_COLUMNS = ("method", "cut", "trials", "n_bits_mean", "n_bits_std",
                   "mae_mean", "mae_std", "seconds_mean", "seconds_std")


def write_summary(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, SUMMARY_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def format_summary(rows) -> str:
    lines = [f"{'method':<9} {'cut':>3} {'n_bits':>14} {'MAE':>16} {'seconds':>16}"]
    for r in rows:
        lines.append(
            f"{r['method']:<9} {r['cut']:>3} "
            f"{r['n_bits_mean']:>7.1f} ± {r['n_bits_std']:<4.1f} "
            f"{r['mae_mean']:>8.3f} ± {r['mae_std']:<5.3f} "
            f"{r['seconds_mean']:>8.2f} ± {r['seconds_std']:<5.2f}"
        )
    return "\n".join(lines)
