"""Generators for the concrete problems: Equality, Inner Product, and the
Hamming-distance threshold problem with its biased-parity sketch embedding."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import generator
from .compiler import ClassicalSMPProtocol, OneWayProtocol
from .embeddings import SignMatrix, ThresholdEmbedding

MAX_BITS = 12
MAX_EXACT_HAM_BITS = 8

_POPCOUNT16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


def _popcount(values: np.ndarray) -> np.ndarray:
    return _POPCOUNT16[values.astype(np.uint16)]


def _check_bits(name: str, n: int) -> None:
    if not (1 <= n <= MAX_BITS):
        raise ValueError(f"{name} must lie in [1, {MAX_BITS}], got {n}")


def eq_matrix(n: int) -> SignMatrix:
    """Equality on n-bit strings: -1 on the diagonal, +1 elsewhere."""
    _check_bits("n", n)
    size = 1 << n
    entries = np.ones((size, size), dtype=np.int8)
    np.fill_diagonal(entries, -1)
    return SignMatrix(entries)


def ip_matrix(k: int) -> SignMatrix:
    """Inner product mod 2 on k-bit strings: M_{xy} = (-1)^{<x,y>}."""
    _check_bits("k", k)
    idx = np.arange(1 << k)
    parities = _popcount(np.bitwise_and.outer(idx, idx)) & 1
    return SignMatrix(1 - 2 * parities.astype(np.int8))


def ham_matrix(n: int, d: int) -> SignMatrix:
    """Hamming threshold: -1 iff the Hamming distance of x and y is <= d."""
    _check_bits("n", n)
    if not (0 <= d < n):
        raise ValueError(f"d must lie in [0, {n - 1}], got {d}")
    idx = np.arange(1 << n)
    dist = _popcount(np.bitwise_xor.outer(idx, idx))
    return SignMatrix(np.where(dist <= d, -1, 1).astype(np.int8))


def _parity_table(n: int, rand_strings: np.ndarray) -> np.ndarray:
    """parities[x, j] = <x, s_j> mod 2 for all n-bit x."""
    xs = np.arange(1 << n)
    return (_popcount(np.bitwise_and.outer(xs, rand_strings)) & 1).astype(np.int64)


def _rand_set(n: int, num_r: int | None, seed) -> np.ndarray:
    if num_r is None:
        return np.arange(1 << n)
    if num_r < 1:
        raise ValueError("num_r must be >= 1")
    return generator(seed).integers(0, 1 << n, size=num_r)


def eq_parity_protocol(n: int, num_r: int | None = None, seed=0) -> ClassicalSMPProtocol:
    """One-bit parity protocol for equality: messages <x,r> and <y,r> mod 2,
    referee accepts iff they agree.

    With the full shared-randomness set (the default) the acceptance
    probability is exactly 1 on x=y and 1/2 on x!=y.  ``num_r`` caps the set
    by a seeded uniform sample instead (the Newman-style alternative).
    """
    _check_bits("n", n)
    rand = _rand_set(n, num_r, seed)
    table = _parity_table(n, rand)
    accept = np.eye(2, dtype=np.int8)
    return ClassicalSMPProtocol(
        n=n,
        c=1,
        rand_strings=tuple(int(r) for r in rand),
        alice_messages=table,
        bob_messages=table,
        accept=accept,
    )


def eq_parity_one_way_protocol(n: int, num_r: int | None = None, seed=0) -> OneWayProtocol:
    """The same parity check expressed one-way: Bob accepts iff Alice's bit
    equals <y, r>."""
    _check_bits("n", n)
    rand = _rand_set(n, num_r, seed)
    table = _parity_table(n, rand)
    # bob_accept[m, y, r] = 1 iff m == <y, r>
    bob_accept = np.stack([(table == m).astype(np.int8) for m in (0, 1)])
    return OneWayProtocol(
        n=n,
        c=1,
        rand_strings=tuple(int(r) for r in rand),
        alice_messages=table,
        bob_accept=bob_accept,
    )


def collision_probability(delta: int, p: float) -> float:
    """Exact agreement probability of two biased-parity sketch bits at
    Hamming distance delta: (1 + (1-2p)^delta) / 2."""
    return (1.0 + (1.0 - 2.0 * p) ** delta) / 2.0


@dataclass(frozen=True)
class HamEmbeddingReport:
    embedding: ThresholdEmbedding
    delta0: float
    delta1: float
    margin_lower_bound: float
    bit_bias: float
    exact: bool
    construction: str = "biased-parity sketch (substituted message functions)"


def ham_parity_embedding(
    n: int, d: int, num_r: int | None = None, seed=0
) -> HamEmbeddingReport:
    """Fingerprint states for the Hamming threshold problem from biased
    parity sketches, with the implied margin lower bound.

    Each sketch bit under random string s is <x, s> mod 2 where s has
    independent Bernoulli(p) entries with p = 1/(2d), so two inputs at
    Hamming distance delta agree with probability (1 + (1-2p)^delta)/2,
    strictly decreasing in delta and leaving a Theta(1/d) gap between
    delta = d and delta = d+1.  (delta0, delta1) are set from these exact
    extremal collision probabilities and the margin lower bound
    (delta1-delta0)/(2+delta1+delta0) follows from the embedding-to-
    realization conversion.

    With ``num_r=None`` (n <= 8) the full string set is enumerated with
    Bernoulli weights, making every pairwise inner product exactly the
    analytic collision probability; otherwise ``num_r`` strings are sampled
    and inner products match within Monte-Carlo error.
    """
    _check_bits("n", n)
    if not (1 <= d < n / 2):
        raise ValueError(f"d must satisfy 1 <= d < n/2, got d={d} at n={n}")
    p = 1.0 / (2.0 * d)
    delta1 = collision_probability(d, p) ** 2
    delta0 = collision_probability(d + 1, p) ** 2
    if delta1 - delta0 < 1e-6:
        raise ValueError(f"collision gap {delta1 - delta0} below 1e-6")
    margin = (delta1 - delta0) / (2.0 + delta1 + delta0)

    if num_r is None:
        if n > MAX_EXACT_HAM_BITS:
            raise ValueError(
                f"exact enumeration is capped at n <= {MAX_EXACT_HAM_BITS}; pass num_r"
            )
        strings = np.arange(1 << n)
        weights = _popcount(strings).astype(np.float64)
        amps = np.sqrt(p**weights * (1.0 - p) ** (n - weights))
        exact = True
    else:
        rng = generator(seed)
        # independent Bernoulli(p) entries per string
        bits = (rng.random((num_r, n)) < p).astype(np.int64)
        strings = (bits << np.arange(n)).sum(axis=1)
        amps = np.full(num_r, 1.0 / math.sqrt(num_r))
        exact = False

    parities = _parity_table(n, strings)  # (2^n, |S|)
    size = 1 << n
    vectors = np.zeros((size, 2 * len(strings)))
    cols = 2 * np.arange(len(strings))
    vectors[np.arange(size)[:, None], cols[None, :] + parities] = amps[None, :]
    embedding = ThresholdEmbedding(vectors, vectors, delta0, delta1)
    return HamEmbeddingReport(
        embedding=embedding,
        delta0=delta0,
        delta1=delta1,
        margin_lower_bound=margin,
        bit_bias=p,
        exact=exact,
    )
