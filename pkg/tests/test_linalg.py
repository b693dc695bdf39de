import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfpsim.linalg import (
    inner,
    linf_to_l1_norm,
    normalize,
    operator_norm,
)


def brute_force_linf_l1(m):
    """Independent oracle: enumerate every sign vector directly."""
    m = np.asarray(m, float)
    return max(
        np.abs(m @ np.array(v)).sum()
        for v in itertools.product((-1.0, 1.0), repeat=m.shape[1])
    )


class TestInner:
    def test_orthogonal(self):
        assert inner((1, 0), (0, 1)) == 0.0

    def test_identical_unit(self):
        assert inner((1, 0), (1, 0)) == 1.0

    def test_arithmetic(self):
        assert inner((0.6, 0.8), (0.8, 0.6)) == pytest.approx(0.96)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            inner((1, 0), (1, 0, 0))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            inner((np.inf, 0), (1, 0))


class TestNormalize:
    def test_three_four(self):
        assert normalize((3, 4)) == pytest.approx([0.6, 0.8])

    def test_identity_case(self):
        assert normalize((1, 0)) == pytest.approx([1.0, 0.0])

    def test_zero_vector(self):
        with pytest.raises(ValueError, match="zero"):
            normalize((0, 0))

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=8))
    def test_unit_norm(self, entries):
        v = np.array(entries)
        if np.linalg.norm(v) == 0:
            return
        assert np.linalg.norm(normalize(v)) == pytest.approx(1.0, abs=1e-12)


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(3)) == pytest.approx(1.0, abs=1e-9)

    def test_diagonal(self):
        assert operator_norm([[3, 0], [0, 4]]) == pytest.approx(4.0, abs=1e-8)

    def test_all_ones_start_in_non_dominant_eigenspace(self):
        # The all-ones vector is an exact eigenvector of M^T M here with
        # eigenvalue 1, while the top singular value is 2; the basis-vector
        # starts must rescue the estimate.
        m = [[-1, -1, 1], [-1, 1, -1], [1, -1, -1]]
        assert operator_norm(m) == pytest.approx(2.0, abs=1e-8)

    def test_hadamard_4x4(self):
        h = np.array([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], float)
        expected = np.linalg.svd(h, compute_uv=False)[0]  # brute-force oracle
        assert expected == pytest.approx(2.0)
        assert operator_norm(h) == pytest.approx(expected, abs=1e-8)

    def test_all_ones_start_in_kernel(self):
        # the all-ones start annihilates; the basis-vector fallback recovers
        assert operator_norm([[1, -1], [-1, 1]]) == pytest.approx(2.0, abs=1e-8)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            operator_norm(np.eye(2), tol=0.0)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_svd_and_transpose(self, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((rng.integers(1, 13), rng.integers(1, 13)))
        expected = np.linalg.svd(m, compute_uv=False)[0]
        assert operator_norm(m) == pytest.approx(expected, abs=1e-9 * max(1, expected))
        assert operator_norm(m) == pytest.approx(operator_norm(m.T), abs=1e-9)


class TestLinfToL1:
    def test_2x2_mixed(self):
        m = [[1, 1], [1, -1]]
        assert linf_to_l1_norm(m) == brute_force_linf_l1(m) == 2.0

    def test_identity(self):
        assert linf_to_l1_norm([[1, 0], [0, 1]]) == 2.0

    def test_1x1(self):
        assert linf_to_l1_norm([[-1]]) == 1.0

    def test_refuses_wide(self):
        with pytest.raises(ValueError, match="refused"):
            linf_to_l1_norm(np.ones((2, 26)))

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_oracle(self, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((rng.integers(1, 7), rng.integers(1, 8)))
        assert linf_to_l1_norm(m) == pytest.approx(brute_force_linf_l1(m), rel=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_cauchy_schwarz_chain(self, seed):
        rng = np.random.default_rng(seed)
        rows, cols = rng.integers(1, 13), rng.integers(1, 13)
        m = rng.choice([-1.0, 1.0], size=(rows, cols))
        bound = np.sqrt(rows * cols) * operator_norm(m)
        assert linf_to_l1_norm(m) <= bound + 1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 6), st.integers(1, 6))
    def test_dominates_any_feasible_point(self, seed, rows, cols):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((rows, cols))
        v = rng.uniform(-1, 1, size=cols)
        v[rng.integers(cols)] = rng.choice([-1.0, 1.0])  # make the inf-norm exactly 1
        assert np.abs(m @ v).sum() <= linf_to_l1_norm(m) + 1e-9
