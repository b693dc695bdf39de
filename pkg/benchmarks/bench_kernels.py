"""Benchmark the numba-jitted kernels against their pure-numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``.  Both paths are imported
directly, so the QFPSIM_PURE_NUMPY flag does not affect this script.
"""

from __future__ import annotations

import time

import numpy as np

from qfpsim._kernels import (
    USING_NUMBA,
    linf_to_l1_numba,
    linf_to_l1_numpy,
    margin_ascent_numba,
    margin_ascent_numpy,
)


def timeit(fn, *args, repeat: int = 3) -> tuple[float, object]:
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_linf(rows: int = 12, cols: int = 22, seed: int = 0) -> None:
    rng = np.random.default_rng(seed)
    m = np.ascontiguousarray(rng.choice([-1.0, 1.0], size=(rows, cols)))
    t_np, v_np = timeit(linf_to_l1_numpy, m)
    line = f"linf_to_l1  {rows}x{cols}: numpy {t_np * 1e3:8.1f} ms"
    if linf_to_l1_numba is not None:
        linf_to_l1_numba(m[:2, :4].copy())  # warm up the JIT
        t_nb, v_nb = timeit(linf_to_l1_numba, m)
        assert v_np == v_nb, (v_np, v_nb)
        line += f" | numba {t_nb * 1e3:8.1f} ms | speedup {t_np / t_nb:5.1f}x"
    print(line)


def bench_ascent(size: int = 8, dim: int = 9, iters: int = 2000, seed: int = 0) -> None:
    rng = np.random.default_rng(seed)
    m = np.ones((size, size))
    np.fill_diagonal(m, -1.0)
    a = rng.standard_normal((size, dim))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b = rng.standard_normal((size, dim))
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    args = (m, a, b, iters, 0.05, 0.999, 1.0, 0.01)
    t_np, r_np = timeit(margin_ascent_numpy, *args)
    line = f"margin_ascent {size}x{size} d={dim}: numpy {t_np * 1e3:8.1f} ms"
    if margin_ascent_numba is not None:
        margin_ascent_numba(m, a.copy(), b.copy(), 2, 0.05, 0.999, 1.0, 0.01)  # warm up
        t_nb, r_nb = timeit(margin_ascent_numba, *args)
        assert abs(r_np[2] - r_nb[2]) < 1e-6, (r_np[2], r_nb[2])
        line += f" | numba {t_nb * 1e3:8.1f} ms | speedup {t_np / t_nb:5.1f}x"
    print(line)


if __name__ == "__main__":
    print(f"numba available: {linf_to_l1_numba is not None} (package using numba: {USING_NUMBA})")
    bench_linf(12, 18)
    bench_linf(12, 22)
    bench_ascent(8, 9, 2000)
    bench_ascent(16, 17, 2000)
