"""Swap-test acceptance law, Monte-Carlo repeated fingerprinting, and the
referee's threshold decision."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import generator, pair_sequence
from .embeddings import (
    Realization,
    SignMatrix,
    ThresholdEmbedding,
    realization_to_embedding,
    verify_realization,
    verify_threshold_embedding,
)

_STATE_NORM_TOL = 1e-6


@dataclass(frozen=True)
class FingerprintProtocol:
    """A repeated-fingerprinting protocol: r parallel swap tests on copies of
    the embedding's states, thresholded at theta by the referee."""

    embedding: ThresholdEmbedding
    repetitions: int
    theta: float

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not (self.embedding.delta0 < self.theta < self.embedding.delta1):
            raise ValueError(
                f"theta={self.theta} must lie strictly between delta0={self.embedding.delta0} "
                f"and delta1={self.embedding.delta1}"
            )

    @property
    def qubits_per_copy(self) -> int:
        return max(1, math.ceil(math.log2(self.embedding.dimension)))

    @property
    def total_qubits(self) -> int:
        # Alice's copies plus Bob's copies.
        return 2 * self.qubits_per_copy * self.repetitions


def _check_state(name: str, v: np.ndarray) -> None:
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > _STATE_NORM_TOL:
        raise ValueError(f"{name} is not a unit state (norm {nrm!r})")


def swap_test_prob(alpha, beta) -> float:
    """Probability of outcome 0: 1/2 + <alpha, beta>^2 / 2."""
    a = np.asarray(alpha, dtype=np.float64)
    b = np.asarray(beta, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"state dimensions differ: {a.shape} vs {b.shape}")
    _check_state("alpha", a)
    _check_state("beta", b)
    return 0.5 + float(a @ b) ** 2 / 2.0


def sample_swap_tests(alpha, beta, r: int, seed) -> np.ndarray:
    """r independent swap-test outcome bits (0 with probability swap_test_prob)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    p_zero = swap_test_prob(alpha, beta)
    rng = generator(seed)
    return (rng.random(r) >= p_zero).astype(np.int8)


def required_repetitions(delta0: float, delta1: float, eps: float) -> int:
    """Hoeffding-sufficient repetition count ceil(8 ln(2/eps) / (delta1-delta0)^2).

    The referee's estimate 2 p_hat - 1 of the squared inner product must land
    on the correct side of the midpoint, i.e. p_hat must deviate by less than
    (delta1-delta0)/4; the constant 8 follows.
    """
    if not (0.0 <= delta0 < delta1 <= 1.0):
        raise ValueError(f"need 0 <= delta0 < delta1 <= 1, got ({delta0}, {delta1})")
    if not (0.0 < eps < 0.5):
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    gap = delta1 - delta0
    return math.ceil(8.0 * math.log(2.0 / eps) / gap**2)


def referee_decide(outcomes, theta: float) -> int:
    """Threshold the estimated squared inner product at theta (ties go to 1)."""
    bits = np.asarray(outcomes)
    if bits.size == 0:
        raise ValueError("outcome list must be nonempty")
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    frac_zero = float(np.mean(bits == 0))
    est = min(max(2.0 * frac_zero - 1.0, 0.0), 1.0)
    return 1 if est >= theta else 0


def protocol_from_margin(m: SignMatrix, r: Realization, eps: float) -> FingerprintProtocol:
    """Build a fingerprinting protocol from a margin-gamma realization:
    converts to a threshold embedding, sizes the repetition count for error
    eps, and thresholds at the midpoint of (delta0, delta1)."""
    report = verify_realization(r, m)
    if not report.valid:
        raise ValueError(
            f"realization does not achieve its margin on M "
            f"(achieved {report.achieved_margin}, claimed {r.gamma})"
        )
    e = realization_to_embedding(r)
    reps = required_repetitions(e.delta0, e.delta1, eps)
    theta = (e.delta0 + e.delta1) / 2.0
    return FingerprintProtocol(e, reps, theta)


@dataclass(frozen=True)
class ProtocolRunReport:
    per_pair_error: np.ndarray = field(repr=False)  # NaN on promise-excluded pairs
    max_error: float
    trials: int
    repetitions: int
    qubits_per_copy: int
    total_qubits: int


def run_protocol(p: FingerprintProtocol, m: SignMatrix, trials: int, seed) -> ProtocolRunReport:
    """Monte-Carlo error estimate of a protocol on every non-promise pair.

    Each pair draws its swap-test bits from an independent PCG64 stream whose
    spawn key mixes in the pair index, so the report is reproducible and pairs
    may be simulated concurrently.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    report = verify_threshold_embedding(p.embedding, m)
    if not report.valid:
        raise ValueError(
            f"embedding is not valid for M (worst f=0 side {report.worst_zero_side}, "
            f"worst f=1 side {report.worst_one_side})"
        )
    errors = np.full((m.rows, m.cols), np.nan)
    for x in range(m.rows):
        for y in range(m.cols):
            entry = int(m.entries[x, y])
            if entry == 0:
                continue
            p_zero = swap_test_prob(p.embedding.alphas[x], p.embedding.betas[y])
            rng = generator(pair_sequence(seed, x, y))
            frac_zero = (rng.random((trials, p.repetitions)) < p_zero).mean(axis=1)
            est = np.clip(2.0 * frac_zero - 1.0, 0.0, 1.0)
            decisions = est >= p.theta
            expected = entry == -1  # -1 encodes f(x,y)=1
            errors[x, y] = float(np.mean(decisions != expected))
    return ProtocolRunReport(
        per_pair_error=errors,
        max_error=float(np.nanmax(errors)),
        trials=trials,
        repetitions=p.repetitions,
        qubits_per_copy=p.qubits_per_copy,
        total_qubits=p.total_qubits,
    )
