"""Benchmark: compiled row-reduction kernel vs the numpy fallback.

Part one times raw RREF calls on random matrices and checks both kernels
agree.  With ``--suite`` it also times the full cohomology lemma suite
under each backend (subprocess, selected via GOGENDS_PURE).

Run:  python3 benchmarks/bench_rowred.py [--suite]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from gogends import _rowred_np

try:
    from gogends import _rowred
except ImportError:
    _rowred = None


def bench_matrices():
    if _rowred is None:
        print("compiled kernel not built; showing fallback timings only")
    rng = np.random.default_rng(20240817)
    shapes = [(200, 120), (600, 300), (1500, 700), (3000, 900)]
    header = f"{'prime':>5} {'shape':>12} {'compiled':>12} {'numpy':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for p in (2, 3):
        for rows, cols in shapes:
            data = rng.integers(0, p, size=(rows, cols), dtype=np.uint8)
            t_np = _time_kernel(_rowred_np, data, p)
            if _rowred is not None:
                t_c = _time_kernel(_rowred, data, p)
                piv_c = _rowred.rref_mod_p(np.ascontiguousarray(data.copy()), p)
                piv_np = _rowred_np.rref_mod_p(np.ascontiguousarray(data.copy()), p)
                assert list(piv_c) == list(piv_np), "kernels disagree"
                print(f"{p:>5} {rows}x{cols:>6} {t_c:>10.3f}s {t_np:>10.3f}s {t_np / t_c:>7.1f}x")
            else:
                print(f"{p:>5} {rows}x{cols:>6} {'n/a':>12} {t_np:>10.3f}s")


def _time_kernel(kernel, data, p, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        work = np.ascontiguousarray(data.copy())
        t0 = time.perf_counter()
        kernel.rref_mod_p(work, p)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_suite():
    for label, env_extra in (("compiled", {}), ("numpy fallback", {"GOGENDS_PURE": "1"})):
        env = dict(os.environ, **env_extra)
        t0 = time.perf_counter()
        subprocess.run(
            [sys.executable, "-m", "gogends.cli", "verify-lemmas", "--prime", "3"],
            check=True,
            env=env,
            stdout=subprocess.DEVNULL,
        )
        print(f"verify-lemmas --prime 3 [{label}]: {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--suite", action="store_true", help="also time the lemma suite per backend")
    args = parser.parse_args()
    bench_matrices()
    if args.suite:
        bench_suite()
