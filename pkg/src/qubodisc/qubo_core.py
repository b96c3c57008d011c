"""QUBO and Ising representations, energies and conversions.

The stored QUBO objective is minimized directly::

    E(z) = sum_{i,j} quad[i, j] * z_i * z_j + offset,    z_i in {0, 1}

with linear terms folded into the diagonal (z_i**2 == z_i). The Ising form
uses the usual ferromagnetic sign convention::

    E(s) = -sum_{i<j} J[i, j] s_i s_j - sum_i h_i s_i + offset,    s_i in {-1, +1}

and the two are linked by z_i = (1 + s_i) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QuboProblem:
    """Dense symmetric QUBO.

    Parameters
    ----------
    quad : array_like, shape (n, n)
        Symmetric coefficient matrix. Diagonal entries carry the linear terms.
    offset : float
        Constant added to every energy.
    """

    quad: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        quad = _frozen(self.quad)
        if quad.ndim != 2 or quad.shape[0] != quad.shape[1] or quad.shape[0] < 1:
            raise DimensionError(f"quad must be a non-empty square matrix, got {quad.shape}")
        if not np.all(np.isfinite(quad)) or not np.isfinite(self.offset):
            raise ValueError("QUBO coefficients must be finite")
        if not np.array_equal(quad, quad.T):
            raise ValueError("quad must be exactly symmetric; use QuboProblem.from_matrix")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_matrix(cls, matrix, offset: float = 0.0) -> "QuboProblem":
        """Build from any square matrix (e.g. upper triangular) by symmetrizing.

        The energy function is unchanged: z^T M z == z^T ((M + M^T) / 2) z.
        """
        m = np.asarray(matrix, dtype=np.float64)
        return cls(0.5 * (m + m.T), offset)

    @property
    def n(self) -> int:
        return self.quad.shape[0]


@dataclass(frozen=True)
class IsingProblem:
    """Ising model with couplings stored in the strict upper triangle."""

    couplings: np.ndarray
    fields: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        j = _frozen(self.couplings)
        h = _frozen(self.fields)
        if h.ndim != 1 or j.shape != (h.size, h.size):
            raise DimensionError(f"couplings {j.shape} incompatible with fields {h.shape}")
        if np.any(np.tril(j) != 0.0):
            raise ValueError("couplings must be strictly upper triangular (i < j)")
        object.__setattr__(self, "couplings", j)
        object.__setattr__(self, "fields", h)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.fields.size

    def energy(self, spins) -> float:
        s = np.asarray(spins, dtype=np.float64)
        if s.shape != (self.n,):
            raise DimensionError(f"expected {self.n} spins, got shape {s.shape}")
        return float(self.offset - s @ self.couplings @ s - self.fields @ s)


def _bits(z, n: int) -> np.ndarray:
    z = np.asarray(z)
    if z.shape != (n,):
        raise DimensionError(f"expected bit-vector of length {n}, got shape {z.shape}")
    return z.astype(np.float64)


def energy(q: QuboProblem, z) -> float:
    """Return ``z^T quad z + offset``."""
    x = _bits(z, q.n)
    return float(x @ q.quad @ x + q.offset)


def delta_energy(q: QuboProblem, z, i: int) -> float:
    """Energy change from flipping bit ``i``, using row ``i`` only.

    With s = +1 for a 0 -> 1 flip and -1 otherwise, the change is
    ``quad[i, i] + 2 * s * (quad[i] @ z)``.
    """
    x = _bits(z, q.n)
    if not 0 <= i < q.n:
        raise IndexError(f"bit index {i} out of range for n={q.n}")
    s = 1.0 if x[i] == 0 else -1.0
    return float(q.quad[i, i] + 2.0 * s * (q.quad[i] @ x))


def flip(z, i: int) -> np.ndarray:
    out = np.array(z, copy=True)
    out[i] = 1 - out[i]
    return out


def qubo_to_ising(q: QuboProblem) -> IsingProblem:
    quad = q.quad
    upper = np.triu(quad, k=1)
    # pair (i<j) contributes 2*Q_ij z_i z_j = Q_ij (1 + s_i + s_j + s_i s_j) / 2
    couplings = -0.5 * upper
    fields = -0.5 * (quad.sum(axis=1))
    offset = q.offset + 0.5 * upper.sum() + 0.5 * np.trace(quad)
    return IsingProblem(couplings, fields, offset)


def ising_to_qubo(p: IsingProblem) -> QuboProblem:
    j = p.couplings
    sym = j + j.T
    quad = -2.0 * sym
    np.fill_diagonal(quad, 2.0 * sym.sum(axis=1) - 2.0 * p.fields)
    offset = p.offset - j.sum() + p.fields.sum()
    return QuboProblem(quad, offset)


def bits_to_spins(z) -> np.ndarray:
    return 2 * np.asarray(z, dtype=np.int64) - 1


def spins_to_bits(s) -> np.ndarray:
    return ((np.asarray(s, dtype=np.int64) + 1) // 2).astype(np.uint8)


def write_qubo(path, q: QuboProblem) -> None:
    """Write ``n offset`` then one ``i j value`` line per nonzero with i <= j."""
    lines = [f"{q.n} {q.offset!r}"]
    rows, cols = np.nonzero(np.triu(q.quad))
    for i, j in zip(rows.tolist(), cols.tolist()):
        lines.append(f"{i} {j} {float(q.quad[i, j])!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_qubo(path) -> QuboProblem:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: header must be 'n offset'")
        n, offset = int(header[0]), float(header[1])
        quad = np.zeros((n, n))
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j, value = line.split()
            i, j = int(i), int(j)
            if not (0 <= i <= j < n):
                raise ValueError(f"{path}:{lineno}: need 0 <= i <= j < {n}, got {i} {j}")
            quad[i, j] = quad[j, i] = float(value)
    return QuboProblem(quad, offset)
