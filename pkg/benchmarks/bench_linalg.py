"""Compare the numba and pure-numpy row-echelon kernels over F_p.

    python benchmarks/bench_linalg.py [--sizes 50 100 200] [--repeat 3]

Also times one end-to-end cohomology table with each backend.  The numba
timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from wptate import linalg
from wptate._config import HAVE_NUMBA
from wptate.polyring import ModulePresentation, WeightedRing
from wptate.tate import CohomologyQuery, sheaf_cohomology

P = 32003


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_rref(sizes, repeat, rng):
    print(f"{'n':>6} {'numpy [s]':>12} {'numba [s]':>12} {'speedup':>9}")
    for n in sizes:
        A = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
        linalg.set_backend("numpy")
        t_np = best_of(lambda: linalg.rref(A, P), repeat)
        R_np = linalg.rref(A, P)
        if HAVE_NUMBA:
            linalg.set_backend("numba")
            linalg.rref(A[:2, :2], P)  # compile
            t_nb = best_of(lambda: linalg.rref(A, P), repeat)
            R_nb = linalg.rref(A, P)
            assert np.array_equal(R_np[0], R_nb[0]) and R_np[1] == R_nb[1]
            print(f"{n:>6} {t_np:>12.4f} {t_nb:>12.4f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{n:>6} {t_np:>12.4f} {'-':>12} {'-':>9}")


def bench_pipeline(repeat):
    R = WeightedRing((1, 1, 1, 2, 2))
    ideal = ["x0*x2-x1^2", "x0*x3-x1*x2^2", "x0*x4-x1*x3", "x1*x3-x2^3", "x1*x4-x2*x3", "x2^2*x4-x3^2"]

    def job():
        M = ModulePresentation.quotient(R, ideal)
        return sheaf_cohomology(CohomologyQuery(M, -3, 2, 1))

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    tables = {}
    for b in backends:
        linalg.set_backend(b)
        job()
        tables[b] = job().entries
        print(f"rational curve, twists -3..2, {b:>5}: {best_of(job, repeat):.3f} s")
    assert all(t == tables["numpy"] for t in tables.values())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    before = linalg.get_backend()
    try:
        bench_rref(args.sizes, args.repeat, rng)
        bench_pipeline(args.repeat)
    finally:
        linalg.set_backend(before)


if __name__ == "__main__":
    main()
