"""Compare the numba and numpy zero-filter kernels of the brute-force oracle.

Usage: python3 benchmarks/bench_oracle.py [--max-order 60] [--repeat 3]
"""
import argparse
import time

import numpy as np

from torus_stab import _kernels, oracle
from torus_stab.parse import parse_poly

CASES = {
    "example curve": ["x^2*y^2+x^2*y+x*y^2+x*y+x+y+1"],
    "x+y+1": ["x+y+1"],
    "quartic": ["x^4 - 2*x^3*y + x*y^3 + 2*y^4 - x*y + 1"],
    "three variables": ["x1*x2*x3 - 1", "x1 + x2 + x3 + 1"],
}


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def kernel_only(max_order, repeat):
    rng = np.random.default_rng(0)
    pts = rng.integers(0, max_order, size=(max_order ** 2 * 20, 2), dtype=np.int64)
    exps = rng.integers(-4, 5, size=(12, 2), dtype=np.int64)
    L = max_order
    p = oracle._prime_for(L)
    r = oracle._root_of_order(L, p)
    pw = np.array([pow(r, i, p) for i in range(L)], dtype=np.int64)
    cvals = rng.integers(0, p, size=12, dtype=np.int64)
    _kernels.zero_mask(pts, exps, cvals, 1, L, pw, p, "numba")
    res = {}
    for b in ("numba", "numpy"):
        res[b], m = _time(lambda: _kernels.zero_mask(pts, exps, cvals, 1, L, pw, p, b), repeat)
        res[b + "_mask"] = m
    assert np.array_equal(res["numba_mask"], res["numpy_mask"])
    print(f"kernel only, {len(pts)} points x 12 terms: numba {res['numba']*1e3:.1f} ms, numpy {res['numpy']*1e3:.1f} ms")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-order", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    kernel_only(args.max_order, args.repeat)
    for name, srcs in CASES.items():
        n = 3 if name == "three variables" else 2
        V = [parse_poly(s, n) for s in srcs]
        mo = args.max_order if n == 2 else min(args.max_order, 30)
        oracle.enumerate_torsion_on(V, 3, backend="numba")
        tn, a = _time(lambda: oracle.enumerate_torsion_on(V, mo, backend="numba"), args.repeat)
        tp, b = _time(lambda: oracle.enumerate_torsion_on(V, mo, backend="numpy"), args.repeat)
        assert a == b
        print(f"{name:16s} max_order {mo:3d}: {len(a):3d} points, numba {tn*1e3:8.1f} ms, numpy {tp*1e3:8.1f} ms")


if __name__ == "__main__":
    main()
