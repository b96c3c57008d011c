"""Synthetic linear-regression data and train/test splitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .regression import RegressionDataset

# intercept first, then x_1..x_9
TRUE_WEIGHTS = np.array([15.5, 15.5, 10.0, 10.0, 5.0, 5.0, -0.5, -0.5, -15.5, -15.5])


@dataclass(frozen=True)
class GeneratorConfig:
    n_total: int = 1000
    train_size: int = 100
    noise_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.train_size < self.n_total:
            raise ValueError("need 0 < train_size < n_total")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def target(features) -> np.ndarray:
    """Noise-free response for an ``N x 9`` feature matrix."""
    F = np.asarray(features, dtype=np.float64)
    return TRUE_WEIGHTS[0] + F @ TRUE_WEIGHTS[1:]


def generate(cfg: GeneratorConfig) -> RegressionDataset:
    """Features uniform on [-1, 1], Gaussian noise of std ``noise_sigma``."""
    rng = np.random.default_rng(cfg.seed)
    F = rng.uniform(-1.0, 1.0, size=(cfg.n_total, TRUE_WEIGHTS.size - 1))
    noise = rng.normal(0.0, 1.0, size=cfg.n_total) * cfg.noise_sigma
    return RegressionDataset.from_features(F, target(F) + noise)


def trial_splits(ds: RegressionDataset, train_size: int, n_trials: int):
    """Split indices into ``n_trials`` disjoint training blocks.

    Trial ``i`` trains on block ``i`` and tests on every other sample.
    """
    if train_size < 1 or n_trials < 1 or n_trials * train_size > ds.N:
        raise DimensionError(
            f"{n_trials} blocks of {train_size} do not fit in {ds.N} samples"
        )
    idx = np.arange(ds.N)
    splits = []
    for i in range(n_trials):
        mask = np.zeros(ds.N, dtype=bool)
        mask[i * train_size:(i + 1) * train_size] = True
        splits.append((idx[mask], idx[~mask]))
    return splits
