"""Dense univariate polynomials over cyclotomic fields.

A polynomial is a list of :class:`CycNum` coefficients, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).
"""
from __future__ import annotations

import numpy as np

from .cyclo import ONE, ZERO, CycNum, cyclotomic_poly, prime_factors
from .laurent import LaurentPoly


def trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def deg(p: list) -> int:
    return len(p) - 1


def from_laurent(f: LaurentPoly, var: int = 0) -> list:
    """Coefficient list of a univariate Laurent polynomial after clearing negative exponents."""
    if not f:
        return []
    lo = min(0, f.min_degree(var))
    out = [ZERO] * (f.degree(var) - lo + 1)
    for e, c in f.terms.items():
        out[e[var] - lo] = c
    return out


def to_laurent(p: list, nvars: int = 1, var: int = 0) -> LaurentPoly:
    terms = {}
    for i, c in enumerate(p):
        if c:
            e = [0] * nvars
            e[var] = i
            terms[tuple(e)] = c
    return LaurentPoly._make(nvars, terms)


def add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def sub(a: list, b: list) -> list:
    return add(a, [-c for c in b])


def mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(a: list, c) -> list:
    c = CycNum.coerce(c)
    return trim([x * c for x in a])


def divmod_(a: list, b: list) -> tuple:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(a)
    db = deg(b)
    if deg(r) < db:
        return [], r
    inv = b[-1].inverse()
    q = [ZERO] * (deg(r) - db + 1)
    for k in range(deg(r) - db, -1, -1):
        c = r[k + db]
        if not c:
            continue
        c = c * inv
        q[k] = c
        for j, y in enumerate(b):
            if y:
                r[k + j] = r[k + j] - c * y
    return trim(q), trim(r[:db])


def rem(a: list, b: list) -> list:
    return divmod_(a, b)[1]


def monic(a: list) -> list:
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a[:-1]] + [ONE]


def gcd(a: list, b: list) -> list:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def resultant(a: list, b: list) -> CycNum:
    """Resultant of two univariate polynomials by the Euclidean recursion."""
    if not a or not b:
        return ZERO
    acc = ONE
    while True:
        da, db = deg(a), deg(b)
        if db == 0:
            return acc * b[0] ** da
        if da == 0:
            return acc * a[0] ** db
        r = rem(a, b)
        if not r:
            return ZERO
        if (da * db) % 2:
            acc = -acc
        acc = acc * b[-1] ** (da - deg(r))
        a, b = b, r


def evaluate(p: list, x) -> CycNum:
    x = CycNum.coerce(x)
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: list) -> list:
    return trim([c * i for i, c in enumerate(p)][1:])


def mulmod(a: list, b: list, m: list) -> list:
    return rem(mul(a, b), m)


def sparse_mod(terms: dict, m: list) -> list:
    """Reduce a sparse polynomial {exponent: coefficient} (exponents >= 0) modulo m."""
    if deg(m) == 0:
        return []
    cache = {}

    def xpow(e):
        if e in cache:
            return cache[e]
        if e < len(m) - 1:
            r = [ZERO] * e + [ONE]
        elif e % 2:
            r = mulmod(xpow(e - 1), [ZERO, ONE], m)
        else:
            h = xpow(e // 2)
            r = mulmod(h, h, m)
        cache[e] = r
        return r

    out: list = []
    for e, c in terms.items():
        out = add(out, scale(xpow(e), c))
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p as int lists, lowest degree first


def _trim_p(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def rem_modp(a: list, b: list, p: int) -> list:
    r = [x % p for x in a]
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv % p
        if c:
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - c * y) % p
    return _trim_p(r[:db])


def gcd_modp(a: list, b: list, p: int) -> list:
    a, b = _trim_p([x % p for x in a]), _trim_p([x % p for x in b])
    while b:
        a, b = b, rem_modp(a, b, p)
    return a


def sparse_mod_modp(terms: dict, m: list, p: int) -> list:
    """A sparse polynomial {exponent: coefficient} over F_p reduced modulo m."""
    if len(m) <= 1:
        return []
    cache = {}
    n = len(m) - 1

    def xpow(e):
        if e in cache:
            return cache[e]
        if e < n:
            r = [0] * e + [1]
        elif e % 2:
            r = rem_modp([0] + xpow(e - 1), m, p)
        else:
            h = xpow(e // 2)
            prod = [0] * (2 * len(h) - 1) if h else []
            for i, x in enumerate(h):
                if x:
                    for j, y in enumerate(h):
                        prod[i + j] += x * y
            r = rem_modp(prod, m, p) if prod else []
        cache[e] = r
        return r

    out = [0] * n
    for e, c in terms.items():
        for i, x in enumerate(xpow(e)):
            out[i] = (out[i] + c * x) % p
    return _trim_p(out)


# ---------------------------------------------------------------------------
# integer polynomials, used for cyclotomic divisibility over Q


def rational_to_int(p: list) -> list:
    """Primitive integer multiple of a polynomial with rational coefficients."""
    fr = [c.to_fraction() for c in p]
    den = 1
    for x in fr:
        den = den * x.denominator // _gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = _gcd(g, x)
    return [x // g for x in ints] if g else ints


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def int_divmod(a: list, b: list):
    """Exact-or-fail division of integer polynomials; returns the quotient or None."""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(r) - 1 < db:
        return None if any(r) else []
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        if c % lead:
            return None
        c //= lead
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] -= c * y
    if any(r[:db]):
        return None
    return q


def _next_prime_1_mod(n: int) -> int:
    k = 1
    while True:
        q = n * k + 1
        if q > 2 and _is_prime(q):
            return q
        k += 1


def _next_prime_1_mod_above(n: int, floor: int) -> int:
    k = max(1, -(-(floor - 1) // n))
    while True:
        q = n * k + 1
        if _is_prime(q):
            return q
        k += 1


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if q % p == 0:
            return q == p
    d, s = q - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, q)
        if x in (1, q - 1):
            continue
        for _ in range(s - 1):
            x = x * x % q
            if x == q - 1:
                break
        else:
            return False
    return True


def _root_of_order(n: int, q: int) -> int:
    ps = prime_factors(n)
    for x in range(2, q):
        h = pow(x, (q - 1) // n, q)
        if all(pow(h, n // p, q) != 1 for p in ps):
            return h
    raise ArithmeticError("no element of the requested order")


def orders_up_to_totient(bound: int) -> list:
    """All N >= 1 with phi(N) <= bound (phi(N) >= sqrt(N/2) caps the search)."""
    limit = 2 * bound * bound + 2
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return [int(n) for n in np.nonzero(phi[1:] <= bound)[0] + 1]


def cyclotomic_multiplicities(p: list) -> dict:
    """{N: multiplicity of Phi_N in p} for an integer polynomial p."""
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    if len(p) <= 1:
        return {}
    out = {}
    for n in orders_up_to_totient(len(p) - 1):
        q = _next_prime_1_mod(n)
        h = _root_of_order(n, q)
        acc = 0
        for c in reversed(p):
            acc = (acc * h + c) % q
        if acc:
            continue
        phi = list(cyclotomic_poly(n))
        m = 0
        while True:
            quot = int_divmod(p, phi)
            if quot is None:
                break
            p = quot
            m += 1
        if m:
            out[n] = m
    return out
