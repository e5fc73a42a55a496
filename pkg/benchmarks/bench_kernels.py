"""Wall-clock comparison of the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once per backend (numba compiles on first call,
or loads from its on-disk cache), then timed; the best of ``--repeat`` runs
is reported.  Outputs of the two backends are compared before timing.
"""

import argparse
import time

import numpy as np

from wronski import combinatorics as comb
from wronski._accel import NUMBA_AVAILABLE
from wronski.degree_lab.preimages import _rhs, big_cell_table
from wronski.kernels import ballot_array, inversion_counts, newton_batch
from wronski.polynomials import RationalPoly


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    m, p = 6, 3
    total = comb.schubert_degree(m, p)
    yield f"ballot_array({m},{p}) [{total} rows]", lambda b: ballot_array(m, p, total, backend=b), np.array_equal

    arr = ballot_array(m, p, total)
    yield f"inversion_counts {arr.shape}", lambda b: inversion_counts(arr, backend=b), np.array_equal

    m, p = 3, 2
    table, _ = big_cell_table(m, p)
    target = RationalPoly.from_roots([-3, -2, -1, 1, 2, 3])
    rhs = np.array([float(c) for c in _rhs(target, m, p)])
    X0 = np.random.default_rng(0).uniform(-3, 3, size=(2000, m * p))
    # divergent starts are chaotic, so only runs converged under both backends
    # are compared
    X_np, c_np, _ = newton_batch(X0, table, rhs, backend="numpy")
    X_nb, c_nb, _ = newton_batch(X0, table, rhs, backend="numba")
    both = c_np & c_nb
    yield (f"newton_batch ({m},{p}) x{len(X0)} starts", lambda b: newton_batch(X0, table, rhs, backend=b)[0],
           lambda a, b: np.allclose(a[both], b[both], rtol=1e-9, atol=1e-9))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':44s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, run, agree in cases():
        same = agree(run("numpy"), run("numba"))
        t_np = best_of(lambda: run("numpy"), args.repeat)
        t_nb = best_of(lambda: run("numba"), args.repeat)
        flag = "" if same else "  (outputs differ)"
        print(f"{name:44s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x{flag}")


if __name__ == "__main__":
    main()
