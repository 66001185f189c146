"""Compare the compiled RK4 kernel against the pure-Python fallback.

Run as ``python benchmarks/rk4_speed.py``.  Set EPILOGISTIC_NUMBA=0 before
running to see the package operate entirely on the fallback path (both rows
then time the same uncompiled function).
"""

import time

import numpy as np

from epilogistic.kernels import _rk4_quadratic, backend, rk4_quadratic

# baseline problem: 236 days at the 0.01-day cross-check step
A1, A2, A3 = 0.06, 1.0 / 3.4e-5, 5.99
N_DAYS, SUBSTEPS = 236, 100
DT = 1.0 / SUBSTEPS


def time_kernel(kernel, repeats):
    out = np.empty(N_DAYS + 1)
    kernel(A1, A2, A3, 1.0, N_DAYS, SUBSTEPS, DT, out)  # warm-up / JIT compile
    start = time.perf_counter()
    for _ in range(repeats):
        kernel(A1, A2, A3, 1.0, N_DAYS, SUBSTEPS, DT, out)
    return (time.perf_counter() - start) / repeats, out[-1]


def main():
    print(f"active backend: {backend()}")
    fast, y_fast = time_kernel(rk4_quadratic, repeats=100)
    slow, y_slow = time_kernel(_rk4_quadratic, repeats=5)
    assert abs(y_fast - y_slow) < 1e-6 * y_slow
    print(f"compiled kernel : {fast * 1e3:9.3f} ms/run")
    print(f"python fallback : {slow * 1e3:9.3f} ms/run")
    print(f"speedup         : {slow / fast:9.1f}x")


if __name__ == "__main__":
    main()
