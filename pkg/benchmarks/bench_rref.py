"""Compare the numba and numpy row-reduction kernels.

    python benchmarks/bench_rref.py [--sizes 50,100,200] [--p 2] [--repeat 5]

Prints one line per size with both timings and checks that the two paths
agree bit for bit. A final end-to-end line times a full acyclic closure
under each kernel.
"""

import argparse
import time

import numpy as np

from tatemodels import _kernels
from tatemodels.dga import Window
from tatemodels.resolve import acyclic_closure
from tatemodels.ring import MapPresentation, QuotientRing, RingPresentation


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(sizes, p, repeat, seed):
    rng = np.random.default_rng(seed)
    for n in sizes:
        A = rng.integers(0, p, size=(n, n + n // 2), dtype=np.int64)
        a, b = A.copy(), A.copy()
        pa, pb = _kernels.rref_numpy(a, p), _kernels.rref_numba(b, p)
        same = np.array_equal(a, b) and np.array_equal(pa, pb)
        t_np = best_of(lambda: _kernels.rref_numpy(A.copy(), p), repeat)
        t_nb = best_of(lambda: _kernels.rref_numba(A.copy(), p), repeat)
        yield n, t_np, t_nb, same


def end_to_end(repeat):
    R = QuotientRing(RingPresentation.from_strings(2, ["x", "y"], ["x^2", "x*y", "y^2"]))
    phi = MapPresentation(R, [R.parse("x"), R.parse("y")])
    out = {}
    saved = _kernels.USE_NUMBA
    for flag in (False, True):
        _kernels.USE_NUMBA = flag
        out[flag] = best_of(lambda: acyclic_closure(phi, Window(7, 12)), repeat)
    _kernels.USE_NUMBA = saved
    return out[False], out[True]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels.rref_numba is None:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")
    _kernels.rref_numba(np.eye(2, dtype=np.int64), args.p)  # compile outside the timings
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'rows':>6} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}  same")
    for n, t_np, t_nb, same in kernel_rows(sizes, args.p, args.repeat, args.seed):
        print(f"{n:>6} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.1f}  {same}")
    t_np, t_nb = end_to_end(max(1, args.repeat // 2))
    print(f"closure of F2[x,y]/(x,y)^2 -> F2, window (7,12): numpy {t_np:.3f}s  numba {t_nb:.3f}s")


if __name__ == "__main__":
    main()
