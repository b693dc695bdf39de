"""Threshold embeddings, margin realizations, their verifiers, and the exact
conversions between the two representations (both directions)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import projections
from ._rng import spawn

UNIT_TOL = 1e-9
VERIFY_TOL = 1e-9
MAX_TENSOR_DIM = 64
REDUCTION_RETRIES = 20


def _unit_rows(name: str, arr: np.ndarray, tol: float = UNIT_TOL) -> None:
    norms = np.linalg.norm(arr, axis=1)
    bad = np.abs(norms - 1.0) > tol
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise ValueError(f"{name}[{idx}] is not a unit vector (norm {norms[idx]!r})")


def _frozen_array(obj, field: str, arr: np.ndarray) -> None:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    object.__setattr__(obj, field, arr)


@dataclass(frozen=True)
class SignMatrix:
    """A {-1, 0, +1} matrix: +1 for f=0, -1 for f=1, 0 for promise-excluded pairs."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"sign matrix must be 2-d and nonempty, got shape {arr.shape}")
        if not np.isin(arr, (-1, 0, 1)).all():
            raise ValueError("sign matrix entries must be -1, 0 or +1")
        if not np.any(arr):
            raise ValueError("sign matrix must have at least one nonzero entry")
        _frozen_array(self, "entries", arr.astype(np.int8))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def is_total(self) -> bool:
        return bool(np.all(self.entries != 0))

    def zero_pairs(self) -> np.ndarray:
        """Boolean mask of (x, y) with f(x, y) = 0 (entry +1)."""
        return self.entries == 1

    def one_pairs(self) -> np.ndarray:
        """Boolean mask of (x, y) with f(x, y) = 1 (entry -1)."""
        return self.entries == -1

    def dense(self) -> np.ndarray:
        return self.entries.astype(np.float64)


@dataclass(frozen=True)
class ThresholdEmbedding:
    """Unit vectors alpha_x, beta_y with squared-inner-product thresholds
    delta0 (upper bound on f=0 pairs) < delta1 (lower bound on f=1 pairs)."""

    alphas: np.ndarray
    betas: np.ndarray
    delta0: float
    delta1: float

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=np.float64)
        b = np.asarray(self.betas, dtype=np.float64)
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
            raise ValueError("alphas and betas must be 2-d with a common dimension")
        _unit_rows("alphas", a)
        _unit_rows("betas", b)
        if not (0.0 <= self.delta0 < self.delta1 <= 1.0):
            raise ValueError(
                f"thresholds must satisfy 0 <= delta0 < delta1 <= 1, got ({self.delta0}, {self.delta1})"
            )
        _frozen_array(self, "alphas", a)
        _frozen_array(self, "betas", b)

    @property
    def dimension(self) -> int:
        return self.alphas.shape[1]


@dataclass(frozen=True)
class Realization:
    """Unit vectors with signed inner products >= gamma on f=0 pairs and
    <= -gamma on f=1 pairs."""

    alphas: np.ndarray
    betas: np.ndarray
    gamma: float

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=np.float64)
        b = np.asarray(self.betas, dtype=np.float64)
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
            raise ValueError("alphas and betas must be 2-d with a common dimension")
        _unit_rows("alphas", a)
        _unit_rows("betas", b)
        if not (0.0 < self.gamma <= 1.0):
            raise ValueError(f"margin must lie in (0, 1], got {self.gamma}")
        _frozen_array(self, "alphas", a)
        _frozen_array(self, "betas", b)

    @property
    def dimension(self) -> int:
        return self.alphas.shape[1]


@dataclass(frozen=True)
class EmbeddingReport:
    valid: bool
    worst_zero_side: float  # max squared inner product over f=0 pairs
    worst_one_side: float  # min squared inner product over f=1 pairs
    worst_zero_pair: tuple[int, int] | None
    worst_one_pair: tuple[int, int] | None


@dataclass(frozen=True)
class RealizationReport:
    valid: bool
    achieved_margin: float
    worst_pair: tuple[int, int] | None


def _check_counts(alphas, betas, m: SignMatrix) -> None:
    if alphas.shape[0] != m.rows or betas.shape[0] != m.cols:
        raise ValueError(
            f"index counts ({alphas.shape[0]}, {betas.shape[0]}) do not match the "
            f"{m.rows}x{m.cols} sign matrix"
        )


def verify_threshold_embedding(e: ThresholdEmbedding, m: SignMatrix) -> EmbeddingReport:
    """Check the threshold inequalities on every non-promise pair of M."""
    _check_counts(e.alphas, e.betas, m)
    sq = (e.alphas @ e.betas.T) ** 2
    zeros, ones = m.zero_pairs(), m.one_pairs()

    worst_zero, zero_pair = 0.0, None
    if zeros.any():
        masked = np.where(zeros, sq, -np.inf)
        flat = int(np.argmax(masked))
        zero_pair = (flat // m.cols, flat % m.cols)
        worst_zero = float(sq[zero_pair])
    worst_one, one_pair = 1.0, None
    if ones.any():
        masked = np.where(ones, sq, np.inf)
        flat = int(np.argmin(masked))
        one_pair = (flat // m.cols, flat % m.cols)
        worst_one = float(sq[one_pair])

    valid = worst_zero <= e.delta0 + VERIFY_TOL and worst_one >= e.delta1 - VERIFY_TOL
    return EmbeddingReport(valid, worst_zero, worst_one, zero_pair, one_pair)


def verify_realization(r: Realization, m: SignMatrix) -> RealizationReport:
    """Check the signed margin on every non-promise pair of M."""
    _check_counts(r.alphas, r.betas, m)
    signed = m.dense() * (r.alphas @ r.betas.T)
    masked = np.where(m.entries != 0, signed, np.inf)
    flat = int(np.argmin(masked))
    pair = (flat // m.cols, flat % m.cols)
    achieved = float(masked[pair])
    return RealizationReport(achieved >= r.gamma - VERIFY_TOL, achieved, pair)


def embed_to_realization(e: ThresholdEmbedding) -> Realization:
    """Convert a threshold embedding into a (d^2+1)-dimensional realization.

    With a = (delta1+delta0)/(2+delta1+delta0) the new vectors are
    (sqrt(a), +-sqrt(1-a) v (x) v), giving margin
    (delta1-delta0)/(2+delta1+delta0).
    """
    d = e.dimension
    if d > MAX_TENSOR_DIM:
        raise ValueError(f"input dimension {d} exceeds the tensor-product cap {MAX_TENSOR_DIM}")
    a = (e.delta1 + e.delta0) / (2.0 + e.delta1 + e.delta0)
    gamma = (e.delta1 - e.delta0) / (2.0 + e.delta1 + e.delta0)

    def lift(vectors: np.ndarray, sign: float) -> np.ndarray:
        tensors = np.einsum("nd,ne->nde", vectors, vectors).reshape(vectors.shape[0], d * d)
        head = np.full((vectors.shape[0], 1), np.sqrt(a))
        return np.hstack([head, sign * np.sqrt(1.0 - a) * tensors])

    return Realization(lift(e.alphas, 1.0), lift(e.betas, -1.0), gamma)


def realization_to_embedding(r: Realization) -> ThresholdEmbedding:
    """Convert a margin-gamma realization into a (d+1)-dimensional threshold
    embedding with delta0 = (1-gamma)^2/4 and delta1 = (1+gamma)^2/4."""
    ones = np.ones((r.alphas.shape[0], 1))
    alphas = np.hstack([ones, r.alphas]) / np.sqrt(2.0)
    ones = np.ones((r.betas.shape[0], 1))
    betas = np.hstack([ones, -r.betas]) / np.sqrt(2.0)
    delta0 = (1.0 - r.gamma) ** 2 / 4.0
    delta1 = (1.0 + r.gamma) ** 2 / 4.0
    return ThresholdEmbedding(alphas, betas, delta0, delta1)


def reduce_realization_dimension(r: Realization, m: SignMatrix, seed) -> Realization:
    """Random-project a realization to roughly O(n/gamma^2) dimensions at half
    the margin, retrying fresh seeds until the projected arrangement verifies.
    """
    report = verify_realization(r, m)
    if not report.valid:
        raise ValueError(
            f"input realization does not achieve its claimed margin "
            f"(achieved {report.achieved_margin}, claimed {r.gamma})"
        )
    count = r.alphas.shape[0] + r.betas.shape[0]
    target = projections.jl_dimension(count + 1, r.gamma / 4.0)
    if target >= r.dimension:
        return r

    for child in spawn(seed, REDUCTION_RETRIES):
        stacked = np.vstack([r.alphas, r.betas])
        projected = projections.project_vectors(stacked, target, child)
        norms = np.linalg.norm(projected, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            continue
        projected = projected / norms
        nx = r.alphas.shape[0]
        candidate = Realization(projected[:nx], projected[nx:], r.gamma / 2.0)
        if verify_realization(candidate, m).valid:
            return candidate
    raise RuntimeError(
        f"dimension reduction failed after {REDUCTION_RETRIES} retries; "
        "the input margin claim is likely too tight"
    )
