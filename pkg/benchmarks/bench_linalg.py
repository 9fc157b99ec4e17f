"""Compare the compiled and numpy row-reduction kernels.

    python3 benchmarks/bench_linalg.py [--repeat 5]

Times ``rref`` on random dense matrices over F_2 and F_3 plus the degree-12
constraint systems of a few engine examples, and checks the two backends
return identical results.
"""

from __future__ import annotations

import argparse
import json
import time
from importlib import resources

import numpy as np

from qstrat import linalg
from qstrat.gcomplex import GComplex
from qstrat.permgroup import group_from_json
from qstrat.quillen import build_category, limit_ring


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def engine_matrices():
    out = []
    for name, ell in [("s4", 2), ("z3xz3_z2", 3), ("d8", 2)]:
        data = json.loads((resources.files("qstrat") / "data" / "groups" / f"{name}.json").read_text())
        G = group_from_json(data)
        L = limit_ring(build_category(G, GComplex.point(len(G.generators)), ell), 0)
        _, mat = L.constraint_matrix(12)
        out.append((f"{name} constraints deg 12", mat, ell))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if linalg.BACKEND != "cython":
        print("compiled kernel not available; only the numpy backend will run")
    rng = np.random.default_rng(args.seed)
    cases = [(f"random {n}x{n} mod {p}", rng.integers(0, p, (n, n)), p)
             for n in (50, 150, 300) for p in (2, 3)]
    cases += engine_matrices()

    print(f"{'case':32s} {'shape':>10s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for label, mat, p in cases:
        tp, (rp, pp) = best_of(lambda: linalg.rref(mat, p, backend="python"), args.repeat)
        if linalg.BACKEND == "cython":
            tc, (rc, pc) = best_of(lambda: linalg.rref(mat, p, backend="cython"), args.repeat)
            assert pp == pc and np.array_equal(rp, rc), label
            cy, speed = f"{tc * 1e3:10.2f}", f"{tp / tc:7.1f}x"
        else:
            cy, speed = f"{'-':>10s}", f"{'-':>8s}"
        shape = f"{mat.shape[0]}x{mat.shape[1]}"
        print(f"{label:32s} {shape:>10s} {tp * 1e3:10.2f} {cy} {speed}")


if __name__ == "__main__":
    main()
