"""Exact arithmetic in cyclotomic fields Q(zeta_M) and bookkeeping of roots of unity.

A :class:`CycNum` stores an element of Q(zeta_M) as an integer coordinate
vector over the power basis ``1, zeta_M, ..., zeta_M^(phi(M)-1)`` together
with a positive common denominator.  Elements are always kept at their
minimal conductor, with the convention that a conductor is never congruent
to 2 mod 4 (Q(zeta_2m) = Q(zeta_m) for odd m).  This makes equality and
hashing structural.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Union

import numpy as np

from .errors import ConductorOverflow

_DEFAULT_MAX_CONDUCTOR = 10**6
_max_conductor = int(os.environ.get("TORUS_STAB_MAX_CONDUCTOR", _DEFAULT_MAX_CONDUCTOR))


def set_max_conductor(cap: int) -> None:
    global _max_conductor
    if cap < 1:
        raise ValueError("conductor cap must be positive")
    _max_conductor = int(cap)


def get_max_conductor() -> int:
    return _max_conductor


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# elementary number theory

@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def _mobius(n: int) -> int:
    ps = prime_factors(n)
    out = 1
    for p in ps:
        n //= p
        if n % p == 0:
            return 0
        out = -out
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    divs = [d for d in range(1, n + 1) if n % d == 0]
    ups = [d for d in divs if _mobius(n // d) == 1]
    downs = [d for d in divs if _mobius(n // d) == -1]
    deg = sum(ups) - sum(downs)
    size = sum(ups) + 1
    poly = [0] * size
    poly[0] = 1
    top = 0
    # multiply by x^d - 1
    for d in ups:
        for i in range(top, -1, -1):
            c = poly[i]
            if c:
                poly[i + d] += c
                poly[i] = -c
        top += d
    # divide by x^d - 1: p_i = q_(i-d) - q_i
    for d in downs:
        q = [0] * (top - d + 1)
        for i in range(top - d + 1):
            q[i] = (q[i - d] if i >= d else 0) - poly[i]
        poly = q
        top -= d
    return tuple(poly[: deg + 1])


@lru_cache(maxsize=None)
def _phi_support(m: int) -> tuple:
    poly = cyclotomic_poly(m)
    return tuple((j, c) for j, c in enumerate(poly[:-1]) if c)


@lru_cache(maxsize=64)
def _phi_dense(m: int):
    poly = cyclotomic_poly(m)
    return np.array(poly[:-1], dtype=np.int64), max(abs(c) for c in poly)


_I64_SAFE = 1 << 62


def reduce_mod_cyclotomic(vec: list, m: int) -> list:
    """Reduce an integer (or rational) coefficient list modulo Phi_m; returns phi(m) entries."""
    phi = totient(m)
    if len(vec) <= phi:
        return list(vec) + [0] * (phi - len(vec))
    if len(vec) - phi > 32 and all(type(x) is int for x in vec):
        out = _reduce_int64(vec, m, phi)
        if out is not None:
            return out
    vec = list(vec)
    support = _phi_support(m)
    for k in range(len(vec) - 1, phi - 1, -1):
        c = vec[k]
        if c:
            base = k - phi
            for j, pj in support:
                vec[base + j] -= c * pj
    return vec[:phi]


def _reduce_int64(vec: list, m: int, phi: int):
    """Vectorized reduction; None when a coefficient could leave the int64 range."""
    bound = max(abs(x) for x in vec)
    dense, height = _phi_dense(m)
    if bound * (height + 1) >= _I64_SAFE:
        return None
    arr = np.array(vec, dtype=np.int64)
    for k in range(len(arr) - 1, phi - 1, -1):
        c = int(arr[k])
        if c:
            if abs(c) * height + bound >= _I64_SAFE:
                return None
            base = k - phi
            seg = arr[base:k]
            seg -= c * dense
            bound = max(bound, int(np.abs(seg).max()))
    return [int(x) for x in arr[:phi]]


def normalize_conductor(n: int, k: int) -> tuple:
    """Reduce zeta_n^k to lowest terms, returning (n', k', sign) with n' not 2 mod 4."""
    k %= n
    g = gcd(k, n)
    n, k = n // g, k // g
    if n % 4 == 2:
        m = n // 2
        sign = -1 if k % 2 else 1
        return m, (k * ((m + 1) // 2)) % m, sign
    return n, k, 1


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    return 1


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    # m1, m2 coprime
    inv = pow(m1, -1, m2)
    return (r1 + m1 * (((r2 - r1) * inv) % m2)) % (m1 * m2)


@lru_cache(maxsize=None)
def _subfield_solver(m: int, p: int):
    """Pivot rows and their inverse for writing elements of Q(zeta_{m/p}) in its own basis (p || m)."""
    d = m // p
    phi_m, phi_d = totient(m), totient(d)
    cols = []
    for j in range(phi_d):
        v = [0] * m
        v[(p * j) % m] = 1
        cols.append(reduce_mod_cyclotomic(v, m))
    # Gaussian elimination on the phi_m x phi_d matrix to locate pivots
    mat = [[Fraction(cols[j][i]) for j in range(phi_d)] for i in range(phi_m)]
    pivots = []
    work = [row[:] for row in mat]
    used = set()
    for j in range(phi_d):
        for i in range(phi_m):
            if i not in used and work[i][j] != 0:
                break
        else:
            raise ArithmeticError("degenerate subfield embedding")
        used.add(i)
        pivots.append(i)
        piv = work[i][j]
        for i2 in range(phi_m):
            if i2 != i and work[i2][j] != 0:
                f = work[i2][j] / piv
                work[i2] = [a - f * b for a, b in zip(work[i2], work[i])]
    sub = [[mat[i][j] for j in range(phi_d)] for i in pivots]
    inv = _invert(sub)
    return tuple(pivots), inv, cols


def _invert(mat: list) -> list:
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        r = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[r] = aug[r], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# roots of unity

@dataclass(frozen=True, order=True)
class RootOfUnity:
    """The root of unity exp(2 pi i q), stored by its exponent q in [0, 1)."""

    exponent: Fraction

    def __post_init__(self):
        q = Fraction(self.exponent)
        object.__setattr__(self, "exponent", q - (q.numerator // q.denominator))

    @classmethod
    def of(cls, n: int, k: int = 1) -> "RootOfUnity":
        return cls(Fraction(k, n))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * e)

    def to_cyc(self) -> "CycNum":
        return CycNum.root(self.exponent.denominator, self.exponent.numerator)

    def __str__(self):
        q = self.exponent
        return f"w({q.denominator},{q.numerator})"


def order(w: RootOfUnity) -> int:
    return w.order


def certify_order_form(w: RootOfUnity, z: int, kmax: int, lmax: int) -> Optional[tuple]:
    """Smallest (k, l), lexicographically, with order(w) | z^k (z^l - 1), k <= kmax, 1 <= l <= lmax."""
    if kmax < 0 or lmax < 0:
        raise ValueError("kmax and lmax must be non-negative")
    n = w.order
    for k in range(kmax + 1):
        zk = pow(z, k, n)
        for l in range(1, lmax + 1):
            if (zk * (pow(z, l, n) - 1)) % n == 0:
                return k, l
    return None


# ---------------------------------------------------------------------------
# field elements

Scalar = Union[int, Fraction, "CycNum"]


class CycNum:
    """Immutable element of a cyclotomic field, kept at its minimal conductor."""

    __slots__ = ("conductor", "num", "den", "_hash")

    def __init__(self, conductor: int, num, den: int = 1):
        self._set(*_canonical(conductor, list(num), den))

    def _set(self, conductor, num, den):
        self.conductor = conductor
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, conductor, num, den):
        obj = cls.__new__(cls)
        obj._set(conductor, num, den)
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q) -> "CycNum":
        q = Fraction(q)
        return cls._raw(1, (q.numerator,), q.denominator)

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CycNum":
        """zeta_n^k = exp(2 pi i k / n)."""
        m, k, sign = normalize_conductor(n, k)
        _check_cap(m)
        v = [0] * m
        v[k] = sign
        return cls(m, reduce_mod_cyclotomic(v, m), 1)

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, RootOfUnity):
            return x.to_cyc()
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNum")

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.conductor == 1 and self.num[0] == 0

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return self.conductor == 1

    def to_fraction(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    def coeffs(self) -> list:
        """Rational coordinates over the power basis of Q(zeta_conductor)."""
        return [Fraction(c, self.den) for c in self.num]

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(self, other, -1)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _add(other, self, -1)

    def __neg__(self):
        return CycNum._raw(self.conductor, tuple(-c for c in self.num), self.den)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(self, other.inverse())

    def __rtruediv__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return _mul(other, self.inverse())

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.conductor == 1:
            return CycNum.rational(Fraction(self.den, self.num[0]))
        m = self.conductor
        a = [Fraction(c) for c in self.num]
        while a and a[-1] == 0:
            a.pop()
        if len(a) == 1:
            q = Fraction(self.den) / a[0]
            return CycNum(m, [q.numerator] + [0] * (len(self.num) - 1), q.denominator)
        # extended Euclid of a against Phi_m over Q
        r0 = [Fraction(c) for c in cyclotomic_poly(m)]
        r1 = a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qpoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(q, s1))
        c = r1[0]
        inv = [x * self.den / c for x in s1]
        num, den = _fractions_to_intvec(reduce_mod_cyclotomic(inv, m))
        return CycNum(m, num, den)

    def galois(self, k: int) -> "CycNum":
        """Image under the automorphism zeta -> zeta^k (k coprime to the conductor)."""
        m = self.conductor
        if m == 1:
            return self
        if gcd(k, m) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        v = [0] * m
        for i, c in enumerate(self.num):
            if c:
                v[(i * k) % m] += c
        return CycNum(m, reduce_mod_cyclotomic(v, m), self.den)

    def lift(self, target: int) -> list:
        """Integer numerator vector of self in Q(zeta_target); target must be a multiple of the conductor."""
        m = self.conductor
        if target % m:
            raise ValueError("target conductor must be a multiple of the conductor")
        step = target // m
        if step == 1:
            return list(self.num)
        v = [0] * target
        for i, c in enumerate(self.num):
            if c:
                v[i * step] = c
        return reduce_mod_cyclotomic(v, target)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.conductor == 1 and Fraction(self.num[0], self.den) == other
        if isinstance(other, CycNum):
            return self.conductor == other.conductor and self.den == other.den and self.num == other.num
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.conductor == 1:
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash((self.conductor, self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"CycNum({self})"

    def __str__(self):
        if self.conductor == 1:
            return str(Fraction(self.num[0], self.den))
        w = as_root_of_unity(self)
        if w is not None:
            return str(w)
        out = ""
        for i, c in enumerate(self.num):
            if c:
                q = Fraction(c, self.den)
                body = str(abs(q)) if i == 0 else f"{abs(q)}*w({self.conductor},{i})"
                if not out:
                    out = ("-" if q < 0 else "") + body
                else:
                    out += (" - " if q < 0 else " + ") + body
        return "(" + out + ")"


def _coerce_or_none(x):
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycNum.rational(x)
    return None


def _check_cap(m: int):
    if m > _max_conductor:
        raise ConductorOverflow(f"conductor {m} exceeds the cap {_max_conductor}")


def _fractions_to_intvec(vec: list) -> tuple:
    den = 1
    for x in vec:
        x = Fraction(x)
        den = lcm(den, x.denominator)
    return [int(Fraction(x) * den) for x in vec], den


def _canonical(m: int, num: list, den: int) -> tuple:
    if den < 0:
        den = -den
        num = [-c for c in num]
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g != 1:
        num = [c // g for c in num]
        den //= g
    if not any(num):
        return 1, (0,), 1
    if m > 1 and not any(num[1:]):
        return 1, (num[0],), den
    return _descend(m, num) + (den,)


def _descend(m: int, num: list) -> tuple:
    changed = True
    while changed and m > 1:
        changed = False
        if not any(num[1:]):
            return 1, (num[0],)
        for p in prime_factors(m):
            d = m // p
            if d % p == 0:
                if any(num[i] for i in range(len(num)) if i % p):
                    continue
                num = num[::p]
                m = d
                if m % 4 == 2:
                    h = m // 2
                    v = [0] * max(h, 1)
                    for i, c in enumerate(num):
                        if c:
                            v[(i * ((h + 1) // 2)) % h] += -c if i % 2 else c
                    num = reduce_mod_cyclotomic(v, h)
                    m = h
                changed = True
                break
            # p exactly divides m: test invariance under Gal(Q(zeta_m)/Q(zeta_d))
            k = _crt(1, d, _primitive_root(p), p) if d > 1 else _primitive_root(p)
            v = [0] * m
            for i, c in enumerate(num):
                if c:
                    v[(i * k) % m] += c
            if reduce_mod_cyclotomic(v, m) != list(num):
                continue
            pivots, inv, _ = _subfield_solver(m, p)
            sub = [num[i] for i in pivots]
            coords = [sum((row[j] * sub[j] for j in range(len(sub))), Fraction(0)) for row in inv]
            # power bases are integral bases, so an integral vector stays integral
            ints, extra = _fractions_to_intvec(coords)
            if extra != 1:
                raise ArithmeticError("non-integral subfield coordinates")
            num = ints
            m = d
            changed = True
            break
    return m, tuple(num)


def _add(a: CycNum, b: CycNum, sign: int) -> CycNum:
    if a.conductor == 1 and b.conductor == 1:
        q = Fraction(a.num[0], a.den) + sign * Fraction(b.num[0], b.den)
        return CycNum._raw(1, (q.numerator,), q.denominator)
    m = lcm(a.conductor, b.conductor)
    _check_cap(m)
    va, vb = a.lift(m), b.lift(m)
    den = lcm(a.den, b.den)
    fa, fb = den // a.den, sign * (den // b.den)
    return CycNum(m, [x * fa + y * fb for x, y in zip(va, vb)], den)


def _mul(a: CycNum, b: CycNum) -> CycNum:
    if a.conductor == 1:
        if b.conductor == 1:
            q = Fraction(a.num[0], a.den) * Fraction(b.num[0], b.den)
            return CycNum._raw(1, (q.numerator,), q.denominator)
        a, b = b, a
    if b.conductor == 1:
        c = b.num[0]
        if c == 0:
            return ZERO
        return CycNum(a.conductor, [x * c for x in a.num], a.den * b.den)
    m = lcm(a.conductor, b.conductor)
    _check_cap(m)
    va, vb = a.lift(m), b.lift(m)
    prod = [0] * (len(va) + len(vb) - 1)
    for i, x in enumerate(va):
        if x:
            for j, y in enumerate(vb):
                if y:
                    prod[i + j] += x * y
    return CycNum(m, reduce_mod_cyclotomic(prod, m), a.den * b.den)


# rational polynomial helpers used by inversion -----------------------------

def _qpoly_trim(p):
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _qpoly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return _qpoly_trim(q), _qpoly_trim(a[: len(b) - 1] or [Fraction(0)])


def _qpoly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _qpoly_trim(out)


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _qpoly_trim([x - y for x, y in zip(a, b)])


ZERO = CycNum._raw(1, (0,), 1)
ONE = CycNum._raw(1, (1,), 1)


# ---------------------------------------------------------------------------

def cyc_arith(a, b, kind: str) -> CycNum:
    a, b = CycNum.coerce(a), CycNum.coerce(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


@lru_cache(maxsize=None)
def _unit_roots(m: int) -> dict:
    """Map numerator vectors of roots of unity with minimal conductor m to their exponents."""
    table = {}
    orders = [m] if m % 2 == 0 else [m, 2 * m]
    if m == 1:
        orders = [1, 2]
    for n in orders:
        for k in range(n):
            if gcd(k, n) == 1:
                c = CycNum.root(n, k)
                if c.den == 1 and c.conductor == m:
                    table[c.num] = Fraction(k, n)
    return table


def as_root_of_unity(a) -> Optional[RootOfUnity]:
    """The exponent q with a = exp(2 pi i q) when a is a root of unity, else None."""
    a = CycNum.coerce(a)
    if a.is_zero() or a.den != 1:
        return None
    q = _unit_roots(a.conductor).get(a.num)
    return None if q is None else RootOfUnity(q)
