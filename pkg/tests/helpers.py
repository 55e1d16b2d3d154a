"""Independent numeric and symbolic checks shared by the test modules."""
import cmath
from fractions import Fraction

import sympy

from torus_stab.cyclo import CycNum
from torus_stab.laurent import LaurentPoly


def cnum(c: CycNum) -> complex:
    z = cmath.exp(2j * cmath.pi / c.conductor)
    return sum(float(a) * z ** i for i, a in enumerate(c.num)) / c.den


def croot(q) -> complex:
    return cmath.exp(2j * cmath.pi * float(Fraction(q)))


def ceval(f: LaurentPoly, point) -> complex:
    vals = [croot(q) for q in point]
    total = 0j
    for e, c in f.terms.items():
        m = cnum(c)
        for v, k in zip(vals, e):
            m *= v ** k
        total += m
    return total


X, Y, W = sympy.symbols("X Y W")


def to_sympy(f: LaurentPoly, gens=(X, Y, W)):
    """Rational-coefficient polynomial as a sympy expression."""
    out = 0
    for e, c in f.terms.items():
        if not c.is_rational():
            raise ValueError("rational coefficients only")
        q = c.to_fraction()
        term = sympy.Rational(q.numerator, q.denominator)
        for g, k in zip(gens, e):
            term *= g ** k
        out += term
    return sympy.expand(out)


def from_sympy(expr, nvars, gens=(X, Y, W)) -> LaurentPoly:
    p = sympy.Poly(sympy.expand(expr), *gens[:nvars])
    terms = {}
    for mon, c in p.terms():
        c = sympy.Rational(c)
        terms[tuple(int(m) for m in mon)] = CycNum.rational(Fraction(int(c.p), int(c.q)))
    return LaurentPoly(nvars, terms)


def rand_poly(draw_int, nvars, nterms, lo=-2, hi=2, maxdeg=3, negative=False):
    """Polynomial with nterms random terms, built from a callable draw_int(a, b)."""
    terms = {}
    for _ in range(nterms):
        e = tuple(draw_int(-maxdeg if negative else 0, maxdeg) for _ in range(nvars))
        c = draw_int(lo, hi)
        if c:
            terms[e] = terms.get(e, 0) + c
    return LaurentPoly(nvars, {e: CycNum.rational(c) for e, c in terms.items() if c})
