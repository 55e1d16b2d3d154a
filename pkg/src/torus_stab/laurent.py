"""Laurent polynomials over cyclotomic fields.

Exponent vectors are plain tuples of Python ints, so exponents of any size
are exact.  A :class:`LaurentPoly` is immutable; zero coefficients are never
stored.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Optional, Sequence

from .cyclo import ONE, ZERO, CycNum, RootOfUnity, as_root_of_unity, lcm, reduce_mod_cyclotomic
from .errors import DimensionMismatch, ZeroPolynomial
from .lattice import UniBasis, inverse_unimodular

ExpVec = tuple


class LaurentPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Dict[ExpVec, object]] = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise DimensionMismatch(f"exponent {e} has length {len(e)}, expected {nvars}")
                c = CycNum.coerce(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, nvars: int, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._make(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "LaurentPoly":
        c = CycNum.coerce(c)
        return cls._make(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "LaurentPoly":
        c = CycNum.coerce(c)
        exps = tuple(int(x) for x in exps)
        return cls._make(len(exps), {exps: c} if c else {})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def binomial(cls, a: Sequence[int], zeta) -> "LaurentPoly":
        """X^a - zeta."""
        a = tuple(int(x) for x in a)
        z = CycNum.coerce(zeta)
        terms = {a: ONE}
        zero = (0,) * len(a)
        terms[zero] = terms.get(zero, ZERO) - z
        return cls._make(len(a), {e: c for e, c in terms.items() if c})

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    @property
    def conductor(self) -> int:
        m = 1
        for c in self.terms.values():
            m = lcm(m, c.conductor)
        return m

    def degree(self, var: int) -> int:
        return max(e[var] for e in self.terms)

    def min_degree(self, var: int) -> int:
        return min(e[var] for e in self.terms)

    def uses(self, var: int) -> bool:
        return any(e[var] for e in self.terms)

    def variables(self) -> tuple:
        return tuple(i for i in range(self.nvars) if self.uses(i))

    def leading_term(self):
        e = max(self.terms)
        return e, self.terms[e]

    def coefficient(self, exps) -> CycNum:
        return self.terms.get(tuple(exps), ZERO)

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, self.nvars)
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPoly._make(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._make(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            c = CycNum.coerce(other)
            if not c:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly._make(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._check(other)
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = acc.get(e)
                acc[e] = c1 * c2 if s is None else s + c1 * c2
        return LaurentPoly._make(self.nvars, {e: c for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return LaurentPoly.monomial([-x * (-k) for x in e], c.inverse() ** (-k))
        result = LaurentPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "LaurentPoly":
        return self * CycNum.coerce(c)

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial X^exps."""
        return LaurentPoly._make(
            self.nvars, {tuple(x + y for x, y in zip(e, exps)): c for e, c in self.terms.items()}
        )

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycNum)):
            return self == LaurentPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {str(self)!r})"

    def __str__(self):
        return format_poly(self)

    # transformations --------------------------------------------------
    def map_exponents(self, fn) -> "LaurentPoly":
        """Apply an injective exponent map; colliding terms are summed all the same."""
        acc: dict = {}
        for e, c in self.terms.items():
            e2 = tuple(fn(e))
            s = acc.get(e2)
            acc[e2] = c if s is None else s + c
        n = len(next(iter(acc))) if acc else self.nvars
        return LaurentPoly._make(n, {e: c for e, c in acc.items() if c})

    def map_coefficients(self, fn) -> "LaurentPoly":
        return LaurentPoly._make(self.nvars, {e: v for e, c in self.terms.items() if (v := fn(c))})

    def galois(self, k: int) -> "LaurentPoly":
        return self.map_coefficients(lambda c: c.galois(k % c.conductor) if c.conductor > 1 else c)

    def clear_denominators(self) -> "LaurentPoly":
        """Shift so that every variable has minimal exponent 0."""
        if not self.terms:
            return self
        mins = [min(e[i] for e in self.terms) for i in range(self.nvars)]
        if not any(mins):
            return self
        return self.shift([-m for m in mins])

    def clear_negative(self) -> "LaurentPoly":
        """Shift only as much as needed to remove negative exponents."""
        if not self.terms:
            return self
        mins = [min(0, min(e[i] for e in self.terms)) for i in range(self.nvars)]
        return self.shift([-m for m in mins]) if any(mins) else self

    def monic(self) -> "LaurentPoly":
        """Scale so the coefficient at the lexicographically greatest exponent is 1."""
        _, c = self.leading_term()
        return self if c == ONE else self * c.inverse()

    def coeffs_in(self, var: int) -> dict:
        """Map exponent of `var` -> coefficient polynomial (with that variable's exponent set to 0)."""
        out: dict = {}
        for e, c in self.terms.items():
            k = e[var]
            e2 = e[:var] + (0,) + e[var + 1:]
            out.setdefault(k, {})[e2] = c
        return {k: LaurentPoly._make(self.nvars, t) for k, t in out.items()}

    def drop_var(self, var: int) -> "LaurentPoly":
        """Remove a variable; its exponents are discarded (caller guarantees they are zero)."""
        return LaurentPoly._make(self.nvars - 1, {e[:var] + e[var + 1:]: c for e, c in self.terms.items()})

    def insert_var(self, var: int) -> "LaurentPoly":
        return LaurentPoly._make(self.nvars + 1, {e[:var] + (0,) + e[var:]: c for e, c in self.terms.items()})

    def permute(self, order: Sequence[int]) -> "LaurentPoly":
        """New variable i is old variable order[i]."""
        return LaurentPoly._make(self.nvars, {tuple(e[j] for j in order): c for e, c in self.terms.items()})

    def specialize(self, var: int, value) -> "LaurentPoly":
        """Substitute a nonzero field element for one variable; the result has nvars - 1 variables."""
        value = CycNum.coerce(value)
        w = as_root_of_unity(value)
        powers: dict = {}
        acc: dict = {}
        for e, c in self.terms.items():
            k = e[var]
            if k not in powers:
                powers[k] = CycNum.root(w.exponent.denominator, w.exponent.numerator * k) if w is not None else value ** k
            e2 = e[:var] + e[var + 1:]
            v = c * powers[k]
            s = acc.get(e2)
            acc[e2] = v if s is None else s + v
        return LaurentPoly._make(self.nvars - 1, {e: c for e, c in acc.items() if c})

    def evaluate(self, values: Sequence) -> CycNum:
        p = self
        for v in reversed(list(values)):
            p = p.specialize(p.nvars - 1, v)
        return p.terms.get((), ZERO)


# ---------------------------------------------------------------------------
# operations

def poly_arith(f: LaurentPoly, g: LaurentPoly, kind: str) -> LaurentPoly:
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"{f.nvars} vs {g.nvars} variables")
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ValueError(f"unknown operation {kind!r}")


def power_substitute(f: LaurentPoly, z: int, t: int) -> LaurentPoly:
    """f(X_1^(z^t), ..., X_n^(z^t))."""
    if t == 0:
        return f
    s = z ** t
    return LaurentPoly._make(f.nvars, {tuple(x * s for x in e): c for e, c in f.terms.items()})


def monomial_normalize(f: LaurentPoly) -> LaurentPoly:
    """Canonical representative of f up to constant and monomial factors."""
    if not f:
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    return f.clear_denominators().monic()


def similar(f: LaurentPoly, g: LaurentPoly) -> bool:
    """f ~ g: the quotient is a constant times a monomial."""
    if not f or not g:
        return not f and not g
    return monomial_normalize(f) == monomial_normalize(g)


@dataclass(frozen=True)
class BinomialShape:
    a: tuple
    zeta: RootOfUnity
    m: int

    def __iter__(self):
        return iter((self.a, self.zeta, self.m))


def is_binomial(f: LaurentPoly) -> Optional[BinomialShape]:
    """For f ~ X^(m a) - zeta with a primitive and zeta a root of unity, return (a, zeta, m)."""
    if not f:
        raise ZeroPolynomial("zero polynomial")
    if len(f) != 2:
        return None
    (e1, c1), (e2, c2) = sorted(f.terms.items(), reverse=True)
    diff = tuple(x - y for x, y in zip(e1, e2))
    m = 0
    for x in diff:
        m = gcd(m, x)
    zeta = as_root_of_unity(-(c2 / c1))
    if zeta is None:
        return None
    return BinomialShape(tuple(x // m for x in diff), zeta, m)


def _basis_inverse(basis) -> tuple:
    if isinstance(basis, UniBasis):
        return basis.inverse
    return inverse_unimodular(basis)


def monoidal_image(f: LaurentPoly, basis) -> LaurentPoly:
    """f^B(Y) = f(Y^(r_1), ..., Y^(r_n)) where r_i are the rows of B^-1."""
    inv = _basis_inverse(basis)
    if len(inv) != f.nvars:
        raise DimensionMismatch(f"basis of size {len(inv)} for {f.nvars} variables")
    cols = list(zip(*inv))
    return f.map_exponents(lambda e: [sum(x * y for x, y in zip(e, col)) for col in cols])


def psi(basis, point: Sequence[RootOfUnity]) -> tuple:
    """Coordinates Y_i = x^(b_i) of a torsion point under the monoidal transformation."""
    b = basis.basis if isinstance(basis, UniBasis) else basis
    qs = [w.exponent for w in point]
    return tuple(RootOfUnity(sum((x * q for x, q in zip(row, qs)), Fraction(0))) for row in b)


def evaluate_at_torsion(f: LaurentPoly, point: Sequence[RootOfUnity]) -> CycNum:
    """Exact value of f at the torsion point (exp(2 pi i q_1), ..., exp(2 pi i q_n))."""
    point = [w if isinstance(w, RootOfUnity) else RootOfUnity(w) for w in point]
    if len(point) != f.nvars:
        raise DimensionMismatch(f"point of length {len(point)} for {f.nvars} variables")
    if not f:
        return ZERO
    big = f.conductor
    for w in point:
        big = lcm(big, w.order)
    CycNum.root(big)  # enforces the conductor cap
    den = 1
    for c in f.terms.values():
        den = lcm(den, c.den)
    acc = [0] * big
    qs = [w.exponent for w in point]
    for e, c in f.terms.items():
        q = sum((x * y for x, y in zip(e, qs)), Fraction(0))
        shift = (q.numerator * (big // q.denominator)) % big
        vec = c.lift(big)
        scale = den // c.den
        for j, v in enumerate(vec):
            if v:
                acc[(j + shift) % big] += v * scale
    return CycNum(big, reduce_mod_cyclotomic(acc, big), den)


def substitute_first(f: LaurentPoly, zeta) -> LaurentPoly:
    """f(zeta, Y_2, ..., Y_n)."""
    if f.nvars < 1:
        raise DimensionMismatch("no variable to substitute")
    if isinstance(zeta, RootOfUnity):
        zeta = zeta.to_cyc()
    return f.specialize(0, zeta)


def total_degree(f: LaurentPoly) -> int:
    if not f:
        raise ZeroPolynomial("zero polynomial has no degree")
    g = f.clear_negative()
    return max(sum(e) for e in g.terms)


# ---------------------------------------------------------------------------
# Newton polygons

@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple
    area: Fraction
    edges: tuple  # (primitive direction, lattice length)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple]) -> list:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 or all(_cross(hull[0], hull[1], p) == 0 for p in hull):
        return [pts[0], pts[-1]]
    return hull


def newton_polygon(f: LaurentPoly) -> NewtonPolygon:
    if not f:
        raise ZeroPolynomial("zero polynomial has no Newton polygon")
    if f.nvars != 2:
        raise DimensionMismatch("Newton polygons are only built for two variables")
    hull = convex_hull(f.terms)
    if len(hull) == 1:
        return NewtonPolygon(tuple(hull), Fraction(0), ())
    pairs = [(hull[0], hull[1])] if len(hull) == 2 else list(zip(hull, hull[1:] + hull[:1]))
    edges = []
    for p, q in pairs:
        d = (q[0] - p[0], q[1] - p[1])
        g = gcd(*d)
        edges.append(((d[0] // g, d[1] // g), g))
    twice = 0
    if len(hull) > 2:
        for p, q in zip(hull, hull[1:] + hull[:1]):
            twice += p[0] * q[1] - p[1] * q[0]
    return NewtonPolygon(tuple(hull), Fraction(abs(twice), 2), tuple(edges))


# ---------------------------------------------------------------------------
# exact division

def divexact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """The Laurent polynomial q with f = g q; raises ArithmeticError when g does not divide f."""
    q = divide(f, g)
    if q is None:
        raise ArithmeticError("inexact Laurent polynomial division")
    return q


def divide(f: LaurentPoly, g: LaurentPoly) -> Optional[LaurentPoly]:
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"{f.nvars} vs {g.nvars} variables")
    if not f:
        return f
    n = f.nvars
    lo = [min(e[i] for e in f.terms) - min(e[i] for e in g.terms) for i in range(n)]
    hi = [max(e[i] for e in f.terms) - max(e[i] for e in g.terms) for i in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        return None
    if g.is_monomial():
        (eg, cg), = g.terms.items()
        inv = cg.inverse()
        return LaurentPoly._make(n, {tuple(x - y for x, y in zip(e, eg)): c * inv for e, c in f.terms.items()})
    eg, cg = g.leading_term()
    inv = cg.inverse()
    gterms = list(g.terms.items())
    rem = dict(f.terms)
    quot = {}
    while rem:
        er = max(rem)
        cr = rem[er]
        e = tuple(x - y for x, y in zip(er, eg))
        if any(x < a or x > b for x, a, b in zip(e, lo, hi)):
            return None
        c = cr * inv
        quot[e] = c
        for e2, c2 in gterms:
            k = tuple(x + y for x, y in zip(e, e2))
            v = rem.get(k, ZERO) - c * c2
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly._make(n, quot)


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    return divide(f, g) is not None


# ---------------------------------------------------------------------------
# text form

def var_names(nvars: int) -> list:
    if nvars == 1:
        return ["x"]
    if nvars == 2:
        return ["x", "y"]
    return [f"x{i + 1}" for i in range(nvars)]


def _prefers_minus(c: CycNum) -> bool:
    if c.is_rational():
        return c.to_fraction() < 0
    w = as_root_of_unity(c)
    if w is None:
        return False
    return (w * RootOfUnity(Fraction(1, 2))).order < w.order


def format_poly(f: LaurentPoly) -> str:
    if not f:
        return "0"
    names = var_names(f.nvars)
    parts = []
    for e, c in sorted(f.terms.items(), reverse=True):
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
        )
        neg = _prefers_minus(c)
        body = -c if neg else c
        cs = str(body)
        if mono:
            term = mono if body == ONE else f"{cs}*{mono}"
        else:
            term = cs
        parts.append(("- " if neg else "+ ") + term)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
