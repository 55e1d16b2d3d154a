"""Exact evaluation of the constants T, E, L, c0, c1, c2 bounding the stabilization index.

All values are Python integers.  Ceilings and floors of expressions containing
gamma_{n-1}^{(n-1)/2} are taken through integer square roots of exact rationals,
so no floating point is involved.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BoundOverflow
from .factor import t0_c0
from .lattice import hermite_constant

_DEFAULT_DIGITS = int(os.environ.get("TORUS_STAB_MAX_DIGITS", "1000000"))


def _ceil_sqrt(x: Fraction) -> int:
    """Least integer m >= 0 with m^2 >= x."""
    n = math.ceil(x)
    if n <= 0:
        return 0
    return math.isqrt(n - 1) + 1


def _floor_sqrt(x: Fraction) -> int:
    return math.isqrt(math.floor(x)) if x > 0 else 0


class _Evaluator:
    def __init__(self, max_digits: int):
        self.max_bits = int(max_digits * math.log2(10)) + 1
        self.trace = []
        self.hermite_is_bound = False

    def _guard(self, v: int) -> int:
        if v.bit_length() > self.max_bits:
            raise BoundOverflow("value exceeds the configured digit cap")
        return v

    def pow(self, z: int, e: int) -> int:
        if e and z > 1 and e * math.log2(z) > self.max_bits:
            raise BoundOverflow(f"{z}^{e} exceeds the configured digit cap")
        return z ** e

    def _gamma_power(self, n: int) -> Fraction:
        """gamma_{n-1}^{n-1}, whose square root is the factor in c1 and c2."""
        h = hermite_constant(n - 1)
        if not h.exact:
            self.hermite_is_bound = True
        return h.power

    def _record(self, name, z, n, d, value):
        self.trace.append((name, z, n, d, value))
        return value

    def c0(self, z: int, d: int) -> int:
        return self._record("c0", z, None, d, t0_c0(z, d)[1])

    def L(self, z: int, n: int, d: int) -> int:
        if n == 1:
            v = 1
        elif n == 2:
            v = 2 * d
        else:
            v = self.L(z, n - 1, self._next_degree(z, d))
        return self._record("L", z, n, d, v)

    def E(self, z: int, n: int, d: int) -> int:
        v = d if n == 1 else self.E(z, n - 1, self._next_degree(z, d))
        return self._record("E", z, n, d, v)

    def _next_degree(self, z: int, d: int) -> int:
        return self._guard(d ** 5 * self.pow(z, d * (d - 1)))

    def c1(self, z: int, n: int, d: int) -> int:
        k = n * (n * n - 1) * d * self.L(z, n, d)
        v = n * (n + 1) * d + _ceil_sqrt(k * k * self._gamma_power(n))
        return self._record("c1", z, n, d, self._guard(v))

    def c2(self, n: int, d: int) -> int:
        k = n * (n * n - 1) * d * d
        v = n * (n + 1) * d + _floor_sqrt(k * k * self._gamma_power(n))
        return self._record("c2", None, n, d, self._guard(v))

    def T(self, z: int, n: int, d: int) -> int:
        if n == 1:
            return self._record("T", z, n, d, d)
        c0 = self.c0(z, d)
        if c0 == 0:
            return self._record("T", z, n, d, 0)
        inner_d = self._guard(self.c1(z, n, d) * self.pow(z, 2 * c0 - 1))
        inner = self.T(self.pow(z, c0), n - 1, inner_d)
        return self._record("T", z, n, d, self._guard(c0 * inner + c0))


@dataclass
class BoundReport:
    z: int
    n: int
    d: int
    T: int
    E: int
    L: int
    c0: int
    c1: int
    c2: int
    trace: list = field(repr=False)
    hermite_is_bound: bool = False
    proof_inequality: object = None

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "n": self.n,
            "d": self.d,
            "T": str(self.T),
            "E": str(self.E),
            "L": str(self.L),
            "c0": str(self.c0),
            "c1": str(self.c1),
            "c2": str(self.c2),
            "hermite_is_bound": self.hermite_is_bound,
            "proof_inequality": self.proof_inequality,
            "trace": [[name, _s(z), n, _s(d), str(v)] for name, z, n, d, v in self.trace],
        }


def _s(x):
    return None if x is None else str(x)


def bounds(z: int, n: int, d: int, max_digits: int = _DEFAULT_DIGITS) -> BoundReport:
    if z < 2 or n < 1 or d < 1:
        raise ValueError("need z >= 2, n >= 1, d >= 1")
    ev = _Evaluator(max_digits)
    T = ev.T(z, n, d)
    E = ev.E(z, n, d)
    L = ev.L(z, n, d)
    c0 = ev.c0(z, d)
    c1 = ev.c1(z, n, d)
    c2 = ev.c2(n, d)
    report = BoundReport(z, n, d, T, E, L, c0, c1, c2, ev.trace, ev.hermite_is_bound)
    report.proof_inequality = _proof_inequality(ev, z, n, d, T, c0, c1)
    return report


def _proof_inequality(ev: _Evaluator, z, n, d, T, c0, c1):
    """Whether l*T(z^l, n-1, c1 z^(k+l-1)) + k <= T(z, n, d) for all 0 <= k <= c0, 1 <= l <= c0.
    Evaluated for n = 2 only, where the inner T is explicit; None otherwise."""
    if n != 2:
        return None
    for k in range(c0 + 1):
        for l in range(1, c0 + 1):
            if l * c1 * z ** (k + l - 1) + k > T:
                return False
    return True


def replay(report: BoundReport, max_digits: int = _DEFAULT_DIGITS) -> bool:
    """Re-evaluate every traced call from its recorded arguments and compare."""
    for name, z, n, d, value in report.trace:
        ev = _Evaluator(max_digits)
        if name == "c0":
            got = ev.c0(z, d)
        elif name == "c2":
            got = ev.c2(n, d)
        else:
            got = getattr(ev, name)(z, n, d)
        if got != value:
            return False
    fresh = bounds(report.z, report.n, report.d, max_digits)
    return (fresh.T, fresh.E, fresh.L, fresh.c0, fresh.c1, fresh.c2) == (
        report.T, report.E, report.L, report.c0, report.c1, report.c2
    )
