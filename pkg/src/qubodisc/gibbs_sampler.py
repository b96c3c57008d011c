"""Correlation estimation for choosing which parameters share binary variables.

A short Metropolis chain is run on the continuous regression cost at a fixed
temperature; the Pearson correlations of the recorded parameter values are
then thresholded and greedily matched into disjoint pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .regression import RegressionDataset, cost_reduced


@dataclass(frozen=True)
class SamplerConfig:
    """Parameters of the Metropolis chain.

    ``interval`` counts single-parameter proposals between recorded samples.
    ``burn_in`` is a number of intervals run and discarded before recording.
    """

    temperature: float = 0.1
    proposal_sigma: float = 0.5
    interval: int = 20
    chain_length: int = 100
    seed: int = 0
    burn_in: int = 0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")
        if not self.proposal_sigma > 0:
            raise ValueError("proposal_sigma must be positive")
        if self.interval < 1:
            raise ValueError("interval must be >= 1")
        if self.chain_length < 2:
            raise ValueError("chain_length must be >= 2")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")


@dataclass
class CorrelationReport:
    corr: np.ndarray
    pairs: list = field(default_factory=list)
    threshold: float = 0.8


def sample_chain(ds: RegressionDataset, cfg: SamplerConfig, *, seed=None,
                 backend: str | None = None, return_acceptance: bool = False):
    """Sample ``cfg.chain_length x D`` parameter vectors, starting from ``w = 0``.

    ``seed`` overrides ``cfg.seed``; anything accepted by
    ``numpy.random.default_rng`` works, including a ``SeedSequence``.
    """
    kernels = _backend.get(backend)
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    D = ds.D
    rows = cfg.burn_in + cfg.chain_length
    m = rows * cfg.interval
    picks = rng.integers(0, D, size=m, dtype=np.intp)
    steps = rng.normal(0.0, cfg.proposal_sigma, size=m)
    uniforms = rng.random(m)

    w = np.zeros(D)
    gw = np.zeros(D)
    out = np.empty((rows, D))
    _, accepted = kernels.metropolis_block(
        np.ascontiguousarray(ds.gram), np.ascontiguousarray(ds.moment), w, gw,
        cost_reduced(w, ds), float(cfg.temperature), picks, steps, uniforms,
        cfg.interval, out,
    )
    samples = out[cfg.burn_in:]
    if return_acceptance:
        return samples, accepted / m
    return samples


def correlation_matrix(samples) -> np.ndarray:
    """Pearson correlations of the columns; constant columns correlate 0 with all."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need a (samples x variables) array with at least 2 rows")
    centered = x - x.mean(axis=0)
    scale = np.sqrt((centered**2).sum(axis=0))
    live = scale > 0
    normed = np.zeros_like(centered)
    normed[:, live] = centered[:, live] / scale[live]
    corr = normed.T @ normed
    corr = np.clip(0.5 * (corr + corr.T), -1.0, 1.0)
    np.fill_diagonal(corr, live.astype(np.float64))
    return corr


def select_pairs(corr, threshold: float) -> list[tuple[tuple[int, int], float]]:
    """Greedy disjoint matching on signed correlation ``>= threshold``.

    Candidates are visited by descending correlation, ties by smallest
    ``(d, d')``; a pair is taken only if neither member is already used.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must lie in (0, 1]")
    corr = np.asarray(corr, dtype=np.float64)
    D = corr.shape[0]
    rows, cols = np.triu_indices(D, k=1)
    vals = corr[rows, cols]
    keep = vals >= threshold
    candidates = sorted(
        zip(vals[keep].tolist(), rows[keep].tolist(), cols[keep].tolist()),
        key=lambda c: (-c[0], c[1], c[2]),
    )
    used: set[int] = set()
    chosen = []
    for rho, a, b in candidates:
        if a in used or b in used:
            continue
        used.update((a, b))
        chosen.append(((a, b), rho))
    return chosen


def correlation_report(ds: RegressionDataset, cfg: SamplerConfig, threshold: float,
                       *, seed=None, backend: str | None = None) -> CorrelationReport:
    corr = correlation_matrix(sample_chain(ds, cfg, seed=seed, backend=backend))
    return CorrelationReport(corr, select_pairs(corr, threshold), threshold)


def write_report(prefix, report: CorrelationReport) -> tuple[Path, Path]:
    """Write ``<prefix>_corr.csv`` (the matrix) and ``<prefix>_pairs.csv``."""
    prefix = Path(prefix)
    corr_path = prefix.with_name(prefix.name + "_corr.csv")
    pairs_path = prefix.with_name(prefix.name + "_pairs.csv")
    D = report.corr.shape[0]
    np.savetxt(corr_path, report.corr, delimiter=",", fmt="%.17g",
               header=",".join(f"w{d}" for d in range(D)), comments="")
    lines = ["d1,d2,rho"] + [f"{a},{b},{rho!r}" for (a, b), rho in report.pairs]
    pairs_path.write_text("\n".join(lines) + "\n")
    return corr_path, pairs_path
