import math
from itertools import combinations

import numpy as np
import pytest

from qubodisc.annealer import AnnealSchedule
from qubodisc.datagen import GeneratorConfig, generate, trial_splits
from qubodisc.errors import PairingError
from qubodisc.gibbs_sampler import correlation_matrix, sample_chain
from qubodisc.harness import (
    RESULT_COLUMNS,
    ExperimentConfig,
    _stream,
    proposed_pairs,
    random_pairs,
    read_results,
    run_experiment,
    run_trial,
    summarize,
    trial_pairs,
    write_results,
    write_summary,
)

QUICK = AnnealSchedule(iterations=300, t0=500.0, gamma=0.97)


@pytest.fixture(scope="module")
def cfg():
    return ExperimentConfig(schedule=QUICK, cut_values=(0, 2, 10), n_trials=10)


@pytest.fixture(scope="module")
def data(cfg):
    return generate(cfg.generator)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(cut_values=(11,))
    with pytest.raises(ValueError):
        ExperimentConfig(threshold=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig(methods=("greedy",))
    with pytest.raises(ValueError):
        ExperimentConfig(n_trials=11)


def test_random_pairs_basic():
    assert random_pairs(10, 0, 1) == []
    pairs = random_pairs(4, 2, 5)
    assert sorted(v for p in pairs for v in p) == [0, 1, 2, 3]
    assert random_pairs(10, 3, 7) == random_pairs(10, 3, 7)
    with pytest.raises(PairingError):
        random_pairs(4, 3, 0)


def test_random_pairs_uniform_d4_p1():
    counts = {p: 0 for p in combinations(range(4), 2)}
    rng = np.random.default_rng(0)
    draws = 10_000
    for _ in range(draws):
        (pair,) = random_pairs(4, 1, rng.integers(1 << 62))
        counts[pair] += 1
    assert len(counts) == math.comb(4, 2)
    for c in counts.values():
        assert abs(c / draws - 1 / 6) < 0.02


def test_none_method_uses_full_encoding(cfg, data):
    r = run_trial(cfg, "none", 0, 0, data)
    assert r.n_bits == 100 and r.pairs == ()
    assert r.mae >= 0


def test_n_bits_formula(cfg, data):
    for trial in range(3):
        p = len(proposed_pairs(cfg, data.subset(trial_splits(data, 100, 10)[trial][0]), trial))
        for method in ("proposed", "random"):
            r = run_trial(cfg, method, 2, trial, data)
            assert len(r.pairs) == p
            assert r.n_bits == 100 - p * 2


def test_proposed_pairs_exceed_threshold(cfg, data):
    for trial in range(cfg.n_trials):
        train = data.subset(trial_splits(data, 100, 10)[trial][0])
        samples = sample_chain(train, cfg.sampler, seed=_stream(cfg, 0, trial))
        corr = correlation_matrix(samples)
        for (a, b), rho in proposed_pairs(cfg, train, trial):
            assert rho >= cfg.threshold
            assert corr[a, b] == rho


def test_pairs_do_not_depend_on_cut(cfg, data):
    a = run_trial(cfg, "proposed", 0, 4, data)
    b = run_trial(cfg, "proposed", 10, 4, data)
    assert a.pairs == b.pairs


def test_run_trial_deterministic(cfg, data):
    a = run_trial(cfg, "random", 2, 1, data)
    b = run_trial(cfg, "random", 2, 1)
    assert (a.mae, a.energy, a.pairs, a.seed) == (b.mae, b.energy, b.pairs, b.seed)


def test_trial_pairs_none_is_empty(cfg, data):
    assert trial_pairs(cfg, "none", data.subset(np.arange(100)), 0) == []


def test_experiment_rows_and_aggregation(tmp_path):
    cfg = ExperimentConfig(schedule=QUICK, cut_values=(0, 1, 3), methods=("proposed", "none"),
                           n_trials=4, generator=GeneratorConfig(n_total=400))
    reports = run_experiment(cfg)
    assert len(reports) == 2 * 3 * 4
    assert [(r.method, r.cut, r.trial) for r in reports] == sorted(
        [(m, c, t) for m in ("proposed", "none") for c in (0, 1, 3) for t in range(4)],
        key=lambda k: (("proposed", "random", "none").index(k[0]), k[1], k[2]),
    )
    none = [r for r in reports if r.method == "none"]
    assert all(r.n_bits == 100 for r in none)

    rows = summarize(reports)
    means = {(r["method"], r["cut"]): r["n_bits_mean"] for r in rows}
    assert means[("proposed", 0)] >= means[("proposed", 1)] >= means[("proposed", 3)]

    path = tmp_path / "results.csv"
    write_results(path, reports)
    written = read_results(path)
    assert tuple(written[0]) == RESULT_COLUMNS
    # independent re-aggregation from the file
    for row in rows:
        vals = [float(w["mae"]) for w in written
                if w["method"] == row["method"] and int(w["cut"]) == row["cut"]]
        mean = sum(vals) / len(vals)
        std = math.sqrt(sum((v - mean) ** 2 for v in vals) / len(vals))
        assert abs(mean - row["mae_mean"]) <= 1e-12
        assert abs(std - row["mae_std"]) <= 1e-12
    write_summary(tmp_path / "summary.csv", rows)
    assert (tmp_path / "summary.csv").read_text().startswith("method,cut,trials")


def test_experiment_none_ten_trials():
    cfg = ExperimentConfig(schedule=AnnealSchedule(5, 1.0, 0.5), cut_values=(0,),
                           methods=("none",))
    reports = run_experiment(cfg)
    assert len(reports) == 10
    assert {r.n_bits for r in reports} == {100}


def test_worker_pool_matches_serial():
    cfg = ExperimentConfig(schedule=QUICK, cut_values=(0, 2), methods=("proposed", "random"),
                           n_trials=2, generator=GeneratorConfig(n_total=300))
    serial = run_experiment(cfg)
    pooled = run_experiment(cfg, workers=2)
    strip = lambda rs: [(r.method, r.cut, r.trial, r.n_bits, r.pairs, r.mae, r.energy, r.seed) for r in rs]
    assert strip(serial) == strip(pooled)


def test_failed_trial_aborts(monkeypatch):
    import qubodisc.harness as h

    def boom(*args, **kwargs):
        raise FloatingPointError("bad state")

    monkeypatch.setattr(h, "anneal", boom)
    cfg = ExperimentConfig(schedule=QUICK, cut_values=(0,), methods=("none",), n_trials=1)
    with pytest.raises(RuntimeError, match="method=none, cut=0, trial=0"):
        run_experiment(cfg)
