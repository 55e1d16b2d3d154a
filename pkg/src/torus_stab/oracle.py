"""Brute-force ground truth: torsion points of bounded order on a variety and their orbits."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from ._upoly import _is_prime, _root_of_order
from .coset import TorsionPoint
from .cyclo import RootOfUnity, lcm
from .errors import ArityLimit, CostLimit
from .laurent import evaluate_at_torsion
from .stab import _polys

MAX_EVALUATIONS = 10 ** 8
MAX_ARITY = 3


@dataclass(frozen=True)
class OracleConfig:
    z: int = 2
    max_order: int = 60
    max_iterations: Optional[int] = None

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be at least 1")
        if self.z < 2:
            raise ValueError("z must be at least 2")
        if self.max_iterations is None:
            object.__setattr__(self, "max_iterations", 4 * self.max_order)


def _prime_for(L: int, floor: int = 1 << 30) -> int:
    k = max(1, floor // L)
    while True:
        q = k * L + 1
        if _is_prime(q):
            return q
        k += 1


def _exact_points(M: int, n: int) -> np.ndarray:
    """Exponent tuples in (Z/M)^n whose point has order exactly M."""
    grids = np.indices((M,) * n).reshape(n, -1).T.astype(np.int64)
    g = np.gcd.reduce(np.concatenate([grids, np.full((len(grids), 1), M, dtype=np.int64)], axis=1), axis=1)
    return grids[g == 1]


class _Prepared:
    """A polynomial reduced to integer data for the modular filter at a given order M."""

    def __init__(self, f):
        self.f = f
        self.exps = np.array(list(f.terms), dtype=np.int64).reshape(len(f.terms), f.nvars)
        self.coeffs = list(f.terms.values())
        self.K = f.conductor

    def data(self, M: int):
        L = lcm(M, self.K)
        p = _prime_for(L)
        r = _root_of_order(L, p)
        pw = np.array([pow(r, i, p) for i in range(L)], dtype=np.int64)
        step = L // self.K
        cvals = []
        for c in self.coeffs:
            acc = 0
            for s, a in enumerate(c.lift(self.K)):
                if a:
                    acc += a * int(pw[(s * step) % L])
            acc = acc * pow(c.den, -1, p)
            cvals.append(acc % p)
        return np.array(cvals, dtype=np.int64), L // M, L, pw, p


def _scan_order(M, n, polys, prepared, backend):
    pts = _exact_points(M, n)
    for prep in prepared:
        if not len(pts):
            break
        cvals, scale, L, pw, p = prep.data(M)
        pts = pts[_kernels.zero_mask(pts, prep.exps, cvals, scale, L, pw, p, backend)]
    found = []
    for row in pts:
        pt = TorsionPoint(tuple(RootOfUnity(Fraction(int(e), M)) for e in row))
        if all(not evaluate_at_torsion(f, pt.coords) for f in polys):
            found.append(pt)
    return found


def enumerate_torsion_on(V, max_order: int, backend: Optional[str] = None, threads: int = 1) -> list:
    """All torsion points of order <= max_order on V, sorted by (order, exponents)."""
    polys = _polys(V)
    n = polys[0].nvars
    if n > MAX_ARITY:
        raise ArityLimit(f"brute force is limited to {MAX_ARITY} variables")
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    cost = sum(M ** n for M in range(1, max_order + 1)) * len(polys)
    if cost > MAX_EVALUATIONS:
        raise CostLimit(f"{cost} evaluations exceed the cap of {MAX_EVALUATIONS}")
    prepared = [_Prepared(f) for f in polys]
    orders = range(1, max_order + 1)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            chunks = list(ex.map(lambda M: _scan_order(M, n, polys, prepared, backend), orders))
    else:
        chunks = [_scan_order(M, n, polys, prepared, backend) for M in orders]
    out = [p for c in chunks for p in c]
    out.sort(key=lambda p: (p.order, p.exponents))
    return out


def _orbit_points(p: TorsionPoint, z: int) -> list:
    seen = []
    s = set()
    while p not in s:
        s.add(p)
        seen.append(p)
        p = p.power(z)
    return seen


def brute_stable(V, z: int, max_order: int, backend: Optional[str] = None, threads: int = 1) -> list:
    """Points of order <= max_order on V whose whole forward orbit stays on V."""
    if z < 2:
        raise ValueError("z must be at least 2")
    pts = enumerate_torsion_on(V, max_order, backend, threads)
    on = set(pts)
    return [p for p in pts if all(q in on for q in _orbit_points(p, z))]


def chain_stabilization(V, z: int, max_order: int, max_iterations: Optional[int] = None, backend=None, threads: int = 1) -> tuple:
    """(u*, [S_0, S_1, ...]) where S_u holds the points of order <= max_order in V(z, u)."""
    cfg = OracleConfig(z, max_order, max_iterations)
    base = enumerate_torsion_on(V, max_order, backend, threads)
    on = set(base)
    sets = [list(base)]
    images = {p: p for p in base}
    u = 0
    while True:
        if u >= cfg.max_iterations:
            raise CostLimit(f"chain did not stabilize within {cfg.max_iterations} steps")
        nxt = []
        for p in sets[-1]:
            q = images[p].power(z)
            images[p] = q
            if q in on:
                nxt.append(p)
        if nxt == sets[-1]:
            break
        sets.append(nxt)
        u += 1
    stable = [p for p in base if all(q in on for q in _orbit_points(p, z))]
    if sorted(sets[-1]) != sorted(stable):
        raise AssertionError("stabilized chain differs from the brute-force stable set")
    return u, sets


def backend_name() -> str:
    return _kernels.active_backend()
