"""Time the numba kernels against their numpy twins, and the whole solver per path.

Usage: python3 benchmarks/bench_kernels.py [--repeat 20] [--solver]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from g3pd import _accel
from g3pd.transforms.curvelet import get_frame

SOLVER_SNIPPET = """
import time
from g3pd import decompose_g3pd, SolverConfig
from g3pd.fixtures import sinusoid_disk
f, _ = sinusoid_disk()
decompose_g3pd(f, SolverConfig(iterations=1))  # warm-up and frame build
t = time.perf_counter()
decompose_g3pd(f, SolverConfig(iterations=20))
print(time.perf_counter() - t)
"""


def best_ms(fn, repeat):
    fn()  # compile / warm caches
    return 1e3 * min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--solver", action="store_true", help="also time 20 solver iterations per path")
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    # a curvelet coefficient vector of a 434x448 padded FVC2004-sized image
    coeffs = rng.standard_normal(get_frame((434, 448)).coeff_count)
    binary = (rng.random((404, 418)) > 0.5).astype(np.uint8)
    blocks = (rng.random((45, 47)) > 0.5).astype(np.uint8)

    cases = [
        ("shrink", lambda: _accel.shrink_numpy(coeffs, 0.5), lambda: _accel.shrink_numba(coeffs, 0.5)),
        ("block_counts", lambda: _accel.block_counts_numpy(binary, 9), lambda: _accel.block_counts_numba(binary, 9)),
        ("neighbor_counts", lambda: _accel.neighbor_counts_numpy(blocks), lambda: _accel.neighbor_counts_numba(blocks)),
    ]
    print(f"{'kernel':16s} {'size':>9s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}  equal")
    sizes = {"shrink": coeffs.size, "block_counts": binary.size, "neighbor_counts": blocks.size}
    for name, ref, fast in cases:
        t_np, t_nb = best_ms(ref, args.repeat), best_ms(fast, args.repeat)
        same = np.array_equal(ref(), fast())
        print(f"{name:16s} {sizes[name]:9d} {t_np:10.3f} {t_nb:10.3f} {t_np / t_nb:7.2f}x  {same}")

    if args.solver:
        for flag in ("0", "1"):
            env = dict(os.environ, G3PD_NUMBA=flag)
            out = subprocess.run([sys.executable, "-c", SOLVER_SNIPPET], env=env, capture_output=True, text=True, check=True)
            label = "numba" if flag == "1" else "numpy"
            print(f"solver, 20 iterations on 256x256 ({label}): {float(out.stdout):.3f} s")


if __name__ == "__main__":
    main()
