"""Gcds, resultants, cyclotomic roots and binomial factors of Laurent polynomials."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from . import _upoly as U
from .cyclo import ONE, ZERO, CycNum, RootOfUnity, certify_order_form, lcm
from .errors import DegenerateInput, DimensionMismatch, LemmaViolation, UnsupportedArity, ZeroPolynomial
from .lattice import extend_to_unimodular, primitive_part
from .laurent import (
    LaurentPoly,
    divide,
    monoidal_image,
    monomial_normalize,
    newton_polygon,
    power_substitute,
    total_degree,
)

log = logging.getLogger(__name__)

MAX_GCD_ARITY = 3


def _one(n: int) -> LaurentPoly:
    return LaurentPoly.constant(1, n)


def _exact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    q = divide(f, g)
    if q is None:
        raise ArithmeticError(f"{g} does not divide {f}")
    return q


def _lc(p: LaurentPoly, v: int) -> LaurentPoly:
    cs = p.coeffs_in(v)
    return cs[max(cs)]


# ---------------------------------------------------------------------------
# gcd


def mgcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Gcd in the Laurent ring, normalized up to units (constants times monomials)."""
    if not f or not g:
        raise ZeroPolynomial("gcd with the zero polynomial")
    if f.nvars > MAX_GCD_ARITY:
        raise UnsupportedArity(f"gcd is limited to {MAX_GCD_ARITY} variables")
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"{f.nvars} vs {g.nvars} variables")
    return monomial_normalize(_gcd(f.clear_denominators(), g.clear_denominators()))


def _gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    n = a.nvars
    a, b = a.clear_denominators(), b.clear_denominators()
    if a.is_constant() or b.is_constant():
        return _one(n)
    used = set(a.variables()) | set(b.variables())
    v = max(used)
    if not a.uses(v):
        return _gcd(a, content(b, v))
    if not b.uses(v):
        return _gcd(content(a, v), b)
    ca, cb = content(a, v), content(b, v)
    c = _gcd(ca, cb)
    pa, pb = _exact(a, ca), _exact(b, cb)
    return c * _prs_gcd(pa, pb, v)


def content(p: LaurentPoly, v: int) -> LaurentPoly:
    """Gcd of the coefficients of p viewed as a polynomial in variable v."""
    n = p.nvars
    acc = None
    for c in p.coeffs_in(v).values():
        acc = c.clear_denominators() if acc is None else _gcd(acc, c)
        if acc.is_constant():
            return _one(n)
    return monomial_normalize(acc)


def _univariate_only(p: LaurentPoly, v: int) -> bool:
    return all(not any(x for i, x in enumerate(e) if i != v) for e in p.terms)


def _as_list(p: LaurentPoly, v: int) -> list:
    out = [ZERO] * (p.degree(v) + 1)
    for e, c in p.terms.items():
        out[e[v]] = c
    return out


def _prem(a: LaurentPoly, b: LaurentPoly, v: int) -> LaurentPoly:
    db = b.degree(v)
    lb = _lc(b, v)
    r = a
    e = a.degree(v) - db + 1
    while r and r.degree(v) >= db:
        k = r.degree(v) - db
        mono = [0] * a.nvars
        mono[v] = k
        r = lb * r - (_lc(r, v) * b).shift(mono)
        e -= 1
    return r * lb ** e if e > 0 else r


def _prs_gcd(a: LaurentPoly, b: LaurentPoly, v: int) -> LaurentPoly:
    """Gcd of two polynomials primitive in v, by the subresultant remainder sequence."""
    n = a.nvars
    if _univariate_only(a, v) and _univariate_only(b, v):
        return U.to_laurent(U.gcd(_as_list(a, v), _as_list(b, v)), n, v)
    if a.degree(v) < b.degree(v):
        a, b = b, a
    g = h = _one(n)
    while True:
        d = a.degree(v) - b.degree(v)
        r = _prem(a, b, v)
        if not r:
            break
        if not r.uses(v):
            return _one(n)
        a, b = b, _exact(r, g * h ** d)
        g = _lc(a, v)
        if d:
            h = _exact(g ** d, h ** (d - 1))
    return _exact(b, content(b, v))


# ---------------------------------------------------------------------------
# resultants


def resultant(f: LaurentPoly, g: LaurentPoly, var: int) -> LaurentPoly:
    """Sylvester resultant eliminating variable `var`; the result does not involve `var`."""
    if not f or not g:
        raise ZeroPolynomial("resultant with the zero polynomial")
    a, b = f.clear_negative(), g.clear_negative()
    if not a.uses(var) or not b.uses(var):
        raise DegenerateInput("both polynomials must involve the eliminated variable")
    others = (set(a.variables()) | set(b.variables())) - {var}
    if not others:
        r = U.resultant(_as_list(a, var), _as_list(b, var))
        return LaurentPoly.constant(r, f.nvars)
    if len(others) == 1:
        return _resultant_interp(a, b, var, others.pop())
    return sylvester_resultant(a, b, var)


def _coeff_lists(p: LaurentPoly, v: int, u: int) -> dict:
    """{exp of v: {exp of u: coeff}} for p involving only v and u."""
    out: dict = {}
    for e, c in p.terms.items():
        out.setdefault(e[v], {})[e[u]] = c
    return out


def _eval_sparse(d: dict, x: int) -> CycNum:
    acc = ZERO
    for k, c in d.items():
        acc = acc + c * (x ** k)
    return acc


def _resultant_interp(a: LaurentPoly, b: LaurentPoly, v: int, u: int) -> LaurentPoly:
    da, db = a.degree(v), b.degree(v)
    bound = da * b.degree(u) + db * a.degree(u)
    ca, cb = _coeff_lists(a, v, u), _coeff_lists(b, v, u)
    xs, ys = [], []
    for x in _integer_points():
        if len(xs) > bound:
            break
        la, lb = _eval_sparse(ca[da], x), _eval_sparse(cb[db], x)
        if not la or not lb:
            continue
        pa = [_eval_sparse(ca.get(k, {}), x) for k in range(da + 1)]
        pb = [_eval_sparse(cb.get(k, {}), x) for k in range(db + 1)]
        xs.append(x)
        ys.append(U.resultant(pa, pb))
    coeffs = _interpolate(xs, ys)
    n = a.nvars
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[u] = k
            terms[tuple(e)] = c
    return LaurentPoly._make(n, terms)


def _integer_points():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


def _interpolate(xs: list, ys: list) -> list:
    """Coefficients (low to high) of the polynomial through (xs, ys), by divided differences."""
    n = len(xs)
    c = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = (c[i] - c[i - 1]) * CycNum.rational(Fraction(1, xs[i] - xs[i - j]))
    out = [ZERO] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + c[i]
        new = [ZERO] * n
        for k in range(n - 1):
            if out[k]:
                new[k + 1] = new[k + 1] + out[k]
                new[k] = new[k] - out[k] * xs[i]
        new[0] = new[0] + c[i]
        out = new
    return U.trim(out)


def sylvester_matrix(a: LaurentPoly, b: LaurentPoly, v: int) -> list:
    da, db = a.degree(v), b.degree(v)
    n = a.nvars
    zero = LaurentPoly.zero(n)
    ca, cb = a.coeffs_in(v), b.coeffs_in(v)
    rows = []
    for i in range(db):
        rows.append([zero] * i + [ca.get(k, zero) for k in range(da, -1, -1)] + [zero] * (db - 1 - i))
    for i in range(da):
        rows.append([zero] * i + [cb.get(k, zero) for k in range(db, -1, -1)] + [zero] * (da - 1 - i))
    return rows


def sylvester_resultant(f: LaurentPoly, g: LaurentPoly, var: int) -> LaurentPoly:
    """Resultant as the fraction-free (Bareiss) determinant of the Sylvester matrix."""
    a, b = f.clear_negative(), g.clear_negative()
    if not a.uses(var) or not b.uses(var):
        raise DegenerateInput("both polynomials must involve the eliminated variable")
    m = sylvester_matrix(a, b, var)
    size = len(m)
    sign = 1
    prev = _one(a.nvars)
    for k in range(size - 1):
        if not m[k][k]:
            piv = next((i for i in range(k + 1, size) if m[i][k]), None)
            if piv is None:
                return LaurentPoly.zero(a.nvars)
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = _exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    return m[-1][-1] * sign


# ---------------------------------------------------------------------------
# roots of unity


def _norm_list(p: list) -> list:
    """Product of all Galois conjugates of a univariate polynomial; rational coefficients."""
    m = 1
    for c in p:
        m = lcm(m, c.conductor)
    if m == 1:
        return p
    out = [ONE]
    for k in range(1, m):
        if _coprime(k, m):
            out = U.mul(out, [c.galois(k) for c in p])
    return out


def _coprime(a: int, b: int) -> bool:
    while b:
        a, b = b, a % b
    return a == 1


def cyclotomic_roots(p: LaurentPoly) -> list:
    """All roots of unity among the roots of a univariate polynomial, with multiplicities."""
    if not p:
        raise ZeroPolynomial("zero polynomial")
    if p.nvars != 1:
        raise DimensionMismatch("cyclotomic_roots expects a univariate polynomial")
    coeffs = U.from_laurent(p.clear_denominators())
    return _cyclo_roots_list(coeffs)


def _cyclo_roots_list(coeffs: list) -> list:
    coeffs = U.trim(list(coeffs))
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return []
    rational = all(c.is_rational() for c in coeffs)
    mults = U.cyclotomic_multiplicities(U.rational_to_int(_norm_list(coeffs)))
    out = []
    for n in sorted(mults):
        for k in range(n):
            if not _coprime(k, n) and n > 1:
                continue
            w = RootOfUnity(Fraction(k, n))
            if rational:
                out.append((w, mults[n]))
                continue
            m = _root_multiplicity(coeffs, w)
            if m:
                out.append((w, m))
    out.sort(key=lambda t: t[0].exponent)
    return out


def _root_multiplicity(coeffs: list, w: RootOfUnity) -> int:
    x = w.to_cyc()
    m = 0
    p = coeffs
    while p and not U.evaluate(p, x):
        m += 1
        p = U.derivative(p)
    return m


# ---------------------------------------------------------------------------
# binomial factors


@dataclass(frozen=True, order=True)
class BinomialFactor:
    """X^a - zeta with a primitive, dividing some polynomial with the given multiplicity."""

    a: tuple
    zeta: RootOfUnity
    multiplicity: int = 1
    cert: Optional[tuple] = field(default=None, compare=False)

    def poly(self) -> LaurentPoly:
        return LaurentPoly.binomial(self.a, self.zeta.to_cyc())

    def key(self) -> tuple:
        return self.a, self.zeta


def _lex_positive(a: tuple) -> tuple:
    for x in a:
        if x:
            return a if x > 0 else tuple(-y for y in a)
    return a


def candidate_directions(f: LaurentPoly) -> list:
    """Primitive lex-positive directions that a binomial divisor of f may have."""
    n = f.nvars
    if n == 1:
        return [(1,)]
    dirs = set()
    if n == 2:
        for d, _ in newton_polygon(f).edges:
            dirs.add(_lex_positive(tuple(d)))
    else:
        support = sorted(f.terms)
        for e1, e2 in itertools.combinations(support, 2):
            dirs.add(_lex_positive(primitive_part([x - y for x, y in zip(e1, e2)])))
    return sorted(dirs)


def _content_first(fb: LaurentPoly) -> list:
    """Gcd over K of the coefficients of fb viewed in K[Y1^{+-1}][Y2, ..., Yn]."""
    groups: dict = {}
    for e, c in fb.terms.items():
        groups.setdefault(e[1:], {})[e[0]] = c
    acc = None
    for g in groups.values():
        lo = min(g)
        lst = [ZERO] * (max(g) - lo + 1)
        for k, c in g.items():
            lst[k - lo] = c
        acc = lst if acc is None else U.gcd(acc, lst)
        if len(acc) <= 1:
            return [ONE]
    return U.monic(acc)


def binomial_factors(f: LaurentPoly) -> list:
    """All binomial divisors X^a - zeta (a primitive, zeta a root of unity) with multiplicities."""
    if not f:
        raise ZeroPolynomial("zero polynomial")
    if f.is_monomial():
        return []
    d = total_degree(f)
    out = []
    for a in candidate_directions(f):
        if sum(x * x for x in a) > 4 * d * d:
            raise LemmaViolation(f"direction {a} longer than twice the degree {d}")
        ub = extend_to_unimodular(a)
        cont = _content_first(monoidal_image(f, ub))
        for w, m in _cyclo_roots_list(cont):
            bf = BinomialFactor(a, w, m)
            _verify_binomial(f, bf)
            out.append(bf)
    return sorted(out)


def _verify_binomial(f: LaurentPoly, bf: BinomialFactor) -> None:
    b = bf.poly()
    q = f
    for _ in range(bf.multiplicity):
        q = divide(q, b)
        if q is None:
            raise LemmaViolation(f"{b} reported with multiplicity {bf.multiplicity} does not divide {f}")
    if divide(q, b) is not None:
        raise LemmaViolation(f"{b} divides {f} more than {bf.multiplicity} times")


def strip_binomials(f: LaurentPoly, factors: list) -> LaurentPoly:
    q = f
    for bf in factors:
        b = bf.poly()
        for _ in range(bf.multiplicity):
            q = _exact(q, b)
    return q


# ---------------------------------------------------------------------------
# coprimality certificates for a small polynomial against a sparse one


def _spec_points(k: int):
    """Integer points in Z^k in order of increasing max-norm, small entries first."""
    vals = (1, -1, 2, -2, 3, -3, 5, 7)
    rank = {x: i for i, x in enumerate(vals)}
    yield from sorted(itertools.product(vals, repeat=k), key=lambda pt: max(rank[x] for x in pt))


class _ModP:
    """Reduction Z[zeta_K] -> F_p for a prime p = 1 mod K, zeta_K sent to a fixed root r."""

    def __init__(self, K: int, skip: int = 0):
        p = U._next_prime_1_mod_above(K, 1 << 61)
        for _ in range(skip):
            p = U._next_prime_1_mod_above(K, p + 1)
        self.K, self.p = K, p
        r = U._root_of_order(K, p)
        self.pw = [pow(r, i, p) for i in range(K)]
        self.cache = {}

    def __call__(self, c: CycNum) -> int:
        got = self.cache.get(c)
        if got is None:
            acc = sum(a * self.pw[s] for s, a in enumerate(c.lift(self.K)) if a)
            got = acc * pow(c.den, -1, self.p) % self.p
            self.cache[c] = got
        return got

    def specialize(self, f: LaurentPoly, v: int, pt: tuple) -> dict:
        p = self.p
        others = [i for i in range(f.nvars) if i != v]
        out: dict = {}
        for e, c in f.terms.items():
            val = self(c)
            for i, x in zip(others, pt):
                if e[i]:
                    val = val * pow(x, e[i], p) % p
            out[e[v]] = (out.get(e[v], 0) + val) % p
        return {k: c for k, c in out.items() if c}


def _modp_coprime(a: LaurentPoly, b: LaurentPoly, v: int, points, mp: _ModP) -> bool:
    """True if some specialization of the other variables makes a and b coprime in F_p[x_v]
    while keeping the degree of a in x_v.  Sound: a common factor involving x_v would survive."""
    da = a.degree(v)
    for pt in points:
        sa = mp.specialize(a, v, pt)
        if sa.get(da, 0) == 0:
            continue
        la = [sa.get(k, 0) for k in range(da + 1)]
        sb = mp.specialize(b, v, pt)
        if len(U.gcd_modp(la, U.sparse_mod_modp(sb, la, mp.p), mp.p)) <= 1:
            return True
    return False


def coprime_certificate(a: LaurentPoly, b: LaurentPoly, tries: int = 12) -> Optional[bool]:
    """True when a and b are certified coprime, False when they certainly share a factor,
    None when the specializations tried were inconclusive.  `b` may be sparse of huge degree."""
    a, b = a.clear_denominators(), b.clear_denominators()
    if a.is_constant() or b.is_constant():
        return True
    mp = _ModP(lcm(a.conductor, b.conductor))
    if a.nvars == 1:
        if _modp_coprime(a, b, 0, [()], mp):
            return True
        la = _as_list(a, 0)
        g = U.gcd(la, U.sparse_mod({e[0]: c for e, c in b.terms.items()}, la))
        return len(g) <= 1
    v = max(a.variables())
    if b.uses(v):
        pts = itertools.islice(_spec_points(a.nvars - 1), tries)
        if not _modp_coprime(a, b, v, pts, mp):
            return None
    c = content(a, v)
    if c.is_constant():
        return True
    for coeff in b.coeffs_in(v).values():
        if coprime_certificate(c, coeff, tries):
            return True
    return None


# ---------------------------------------------------------------------------
# the gcd of f and its power substitutions


def t0_c0(z: int, d: int) -> tuple:
    """t0 = ceil(3 log d / log z), computed as the least t with z^t >= d^3; c0 = t0 + d(d-1)."""
    t, p, target = 0, 1, d ** 3
    while p < target:
        p *= z
        t += 1
    return t, t + d * (d - 1)


@dataclass
class GcdSplit:
    t1: int
    g: LaurentPoly
    binomials: list
    source: LaurentPoly = field(repr=False)
    z: int = field(repr=False, default=2)

    @cached_property
    def cofactors(self) -> tuple:
        ft = power_substitute(self.source, self.z, self.t1)
        out = []
        for p in (self.source, ft):
            q = p
            for bf in self.binomials:
                b = bf.poly()
                for _ in range(bf.multiplicity):
                    q = _exact(q, b)
            out.append(q)
        return tuple(out)


def gcd_power_split(f: LaurentPoly, z: int) -> GcdSplit:
    """Least t in [t0, c0] for which gcd(f, f^t) is a product of binomials X^a - zeta."""
    if not f:
        raise ZeroPolynomial("zero polynomial")
    if f.nvars > MAX_GCD_ARITY:
        raise UnsupportedArity(f"gcd is limited to {MAX_GCD_ARITY} variables")
    if z < 2:
        raise ValueError("z must be at least 2")
    d = total_degree(f)
    if d < 1:
        raise DegenerateInput("f must have positive total degree")
    t0, c0 = t0_c0(z, d)
    factors = binomial_factors(f)
    mult = {bf.key(): bf.multiplicity for bf in factors}
    rest = strip_binomials(f, factors)
    for t in range(t0, max(c0, 1) + 1):
        zt = z ** t
        common = []
        for bf in factors:
            m = min(bf.multiplicity, mult.get((bf.a, bf.zeta ** zt), 0))
            if m:
                common.append(BinomialFactor(bf.a, bf.zeta, m))
        ft = power_substitute(f, z, t)
        ok = coprime_certificate(rest, ft)
        if ok is None:
            log.debug("specialization inconclusive at t=%d, computing the full gcd", t)
            g_full = mgcd(f, ft)
            ok = _similar_product(g_full, common)
        if not ok:
            continue
        g = _one(f.nvars)
        certified = []
        for bf in common:
            cert = certify_order_form(bf.zeta, z, max(c0, 0), max(c0, 1))
            if cert is None:
                raise LemmaViolation(f"no order certificate within c0={c0} for {bf.zeta}")
            certified.append(BinomialFactor(bf.a, bf.zeta, bf.multiplicity, cert))
            g = g * bf.poly() ** bf.multiplicity
        return GcdSplit(t, monomial_normalize(g), certified, f, z)
    raise LemmaViolation(f"no t in [{t0}, {c0}] gives a binomial gcd")


def _similar_product(g: LaurentPoly, common: list) -> bool:
    p = _one(g.nvars)
    for bf in common:
        p = p * bf.poly() ** bf.multiplicity
    return monomial_normalize(p) == monomial_normalize(g)
