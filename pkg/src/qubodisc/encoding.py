"""Binary expansion of continuous parameters, with optional bit sharing.

A plan maps every slot ``(d, k)`` (parameter ``d``, basis position ``k``;
both 0-based) to a global binary-variable index. Decoding is

    w_d = sum_k basis[k] * z[slots[d, k]]

which is the product ``w = B' z`` with ``B'`` the (possibly reduced) basis
matrix. The unreduced plan is ``B = I_D (x) b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, PairingError


@dataclass(frozen=True)
class BasisVector:
    """Basis coefficients ``b_1..b_K`` in ascending order of absolute value."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("basis needs at least one coefficient")
        if not all(np.isfinite(v) and v != 0.0 for v in vals):
            raise ValueError("basis coefficients must be finite and nonzero")
        mags = [abs(v) for v in vals]
        if any(a > b for a, b in zip(mags, mags[1:])):
            raise ValueError("basis must be sorted by ascending absolute value")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.values)


# binary expansion used in the regression benchmark
DEFAULT_BASIS = BasisVector((0.5, -0.5, 1, -1, 2, -2, 4, -4, 8, -8))


@dataclass(frozen=True)
class EncodingPlan:
    basis: BasisVector
    slots: np.ndarray

    def __post_init__(self):
        slots = np.array(self.slots, dtype=np.int64, copy=True)
        if slots.ndim != 2 or slots.shape[1] != len(self.basis) or slots.shape[0] < 1:
            raise DimensionError(f"slots must have shape (D, {len(self.basis)}), got {slots.shape}")
        distinct = np.unique(slots)
        if not np.array_equal(distinct, np.arange(distinct.size)):
            raise ValueError("global indices must be dense 0..n_bits-1")
        for row in slots:
            if np.unique(row).size != row.size:
                raise ValueError("a parameter may not use the same binary variable twice")
        # a shared global index must always carry the same basis position
        owner = np.full(distinct.size, -1)
        for k in range(slots.shape[1]):
            col = slots[:, k]
            if np.any((owner[col] != -1) & (owner[col] != k)):
                raise ValueError("shared binary variable used at different basis positions")
            owner[col] = k
        slots.setflags(write=False)
        object.__setattr__(self, "slots", slots)

    @property
    def D(self) -> int:
        return self.slots.shape[0]

    @property
    def K(self) -> int:
        return self.slots.shape[1]

    @property
    def n_bits(self) -> int:
        return int(self.slots.max()) + 1

    def matrix(self) -> np.ndarray:
        """Dense ``D x n_bits`` basis matrix ``B'``."""
        out = np.zeros((self.D, self.n_bits))
        b = self.basis.array
        for d in range(self.D):
            out[d, self.slots[d]] += b
        return out


def full_plan(D: int, basis: BasisVector) -> EncodingPlan:
    if D < 1:
        raise ValueError(f"need at least one continuous variable, got D={D}")
    K = len(basis)
    return EncodingPlan(basis, np.arange(D * K).reshape(D, K))


def _check_pairs(pairs: Iterable[Sequence[int]], D: int) -> list[tuple[int, int]]:
    seen: set[int] = set()
    out = []
    for pair in pairs:
        a, b = (int(v) for v in pair)
        if a == b:
            raise PairingError(f"pair ({a}, {b}) pairs a variable with itself")
        for v in (a, b):
            if not 0 <= v < D:
                raise PairingError(f"variable index {v} out of range for D={D}")
            if v in seen:
                raise PairingError(f"variable {v} appears in more than one pair")
            seen.add(v)
        out.append((min(a, b), max(a, b)))
    return out


def reduce_plan(plan: EncodingPlan, pairs, c: int) -> EncodingPlan:
    """Share the ``c`` largest-magnitude basis slots within each pair.

    For a pair ``(d, d')`` with ``d < d'``, slots ``K-1, K-2, ..., K-c`` of
    ``d`` are redirected to the matching slots of ``d'``. Global indices are
    then renumbered densely, keeping their original relative order.
    """
    K = plan.K
    if not 0 <= c <= K:
        raise ValueError(f"shared-bit count c={c} outside 0..{K}")
    pairs = _check_pairs(pairs, plan.D)
    slots = plan.slots.copy()
    for lo, hi in pairs:
        slots[lo, K - c:] = slots[hi, K - c:]
    _, dense = np.unique(slots, return_inverse=True)
    return EncodingPlan(plan.basis, dense.reshape(slots.shape))


def decode(plan: EncodingPlan, z) -> np.ndarray:
    z = np.asarray(z)
    if z.shape != (plan.n_bits,):
        raise DimensionError(f"expected {plan.n_bits} bits, got shape {z.shape}")
    return (plan.basis.array * z[plan.slots]).sum(axis=1)


def write_plan(path, plan: EncodingPlan) -> None:
    """Plain text: a ``basis`` line, then one ``d k g`` triple per slot."""
    lines = ["basis " + " ".join(repr(v) for v in plan.basis.values)]
    for d in range(plan.D):
        for k in range(plan.K):
            lines.append(f"{d} {k} {int(plan.slots[d, k])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_plan(path) -> EncodingPlan:
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or lines[0][0] != "basis":
        raise ValueError(f"{path}: first line must start with 'basis'")
    basis = BasisVector(tuple(float(v) for v in lines[0][1:]))
    triples = np.array([[int(t) for t in ln] for ln in lines[1:]], dtype=np.int64)
    D = int(triples[:, 0].max()) + 1
    slots = np.full((D, len(basis)), -1, dtype=np.int64)
    slots[triples[:, 0], triples[:, 1]] = triples[:, 2]
    if np.any(slots < 0):
        raise ValueError(f"{path}: missing (d, k) records")
    return EncodingPlan(basis, slots)
