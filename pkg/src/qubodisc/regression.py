"""Linear-regression cost, its QUBO form, and reference solvers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .encoding import EncodingPlan
from .errors import DimensionError, SingularityError
from .qubo_core import QuboProblem


@dataclass(frozen=True)
class RegressionDataset:
    """Design matrix with a leading column of ones, plus targets.

    Parameters
    ----------
    X : array_like, shape (N, D)
        First column must be the dummy variable 1.
    y : array_like, shape (N,)
    """

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64, copy=True)
        y = np.array(self.y, dtype=np.float64, copy=True)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DimensionError(f"X must be a non-empty N x D matrix, got {X.shape}")
        if y.shape != (X.shape[0],):
            raise DimensionError(f"y has shape {y.shape}, expected ({X.shape[0]},)")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset entries must be finite")
        if np.any(X[:, 0] != 1.0):
            raise ValueError("first column of X must be all ones")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_features(cls, features, y) -> "RegressionDataset":
        """Prepend the dummy column to an ``N x (D-1)`` feature matrix."""
        F = np.asarray(features, dtype=np.float64)
        if F.ndim == 1:
            F = F[:, None]
        return cls(np.column_stack([np.ones(F.shape[0]), F]), y)

    @property
    def N(self) -> int:
        return self.X.shape[0]

    @property
    def D(self) -> int:
        return self.X.shape[1]

    @cached_property
    def gram(self) -> np.ndarray:
        """``X^T X``"""
        return self.X.T @ self.X

    @cached_property
    def moment(self) -> np.ndarray:
        """``X^T y``"""
        return self.X.T @ self.y

    def subset(self, index) -> "RegressionDataset":
        return RegressionDataset(self.X[index], self.y[index])


def _weights(w, D: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (D,):
        raise DimensionError(f"expected {D} weights, got shape {w.shape}")
    return w


def cost_reduced(w, ds: RegressionDataset) -> float:
    """``w^T X^T X w - 2 w^T X^T y``: the squared residual minus ``y^T y``."""
    w = _weights(w, ds.D)
    return float(w @ ds.gram @ w - 2.0 * (w @ ds.moment))


def build_qubo(ds: RegressionDataset, plan: EncodingPlan) -> QuboProblem:
    """QUBO whose energy at ``z`` equals ``cost_reduced(decode(plan, z), ds)``."""
    if plan.D != ds.D:
        raise DimensionError(f"plan encodes {plan.D} parameters, dataset has {ds.D}")
    B = plan.matrix()
    quad = B.T @ ds.gram @ B
    quad = 0.5 * (quad + quad.T)
    quad[np.diag_indices_from(quad)] -= 2.0 * (B.T @ ds.moment)
    return QuboProblem(quad, 0.0)


def predict(w, ds: RegressionDataset) -> np.ndarray:
    return ds.X @ _weights(w, ds.D)


def mae(w, ds: RegressionDataset) -> float:
    return float(np.mean(np.abs(ds.y - predict(w, ds))))


def exact_solve(ds: RegressionDataset) -> np.ndarray:
    """Least-squares weights from the normal equations."""
    gram = ds.gram
    if np.linalg.matrix_rank(gram) < ds.D:
        raise SingularityError("X^T X is singular; weights are not identifiable")
    try:
        return np.linalg.solve(gram, ds.moment)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(str(exc)) from exc


def save_dataset(path, ds: RegressionDataset) -> None:
    """Comma-delimited rows: features (dummy column dropped) then target."""
    header = ",".join([f"x{d}" for d in range(1, ds.D)] + ["y"])
    np.savetxt(path, np.column_stack([ds.X[:, 1:], ds.y]), delimiter=",",
               header=header, fmt="%.17g")


def load_dataset(path) -> RegressionDataset:
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return RegressionDataset.from_features(data[:, :-1], data[:, -1])
