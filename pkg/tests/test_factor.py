import random
from fractions import Fraction as F

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, strategies as st

from torus_stab.cyclo import CycNum, RootOfUnity, certify_order_form, cyclotomic_poly
from torus_stab.errors import DegenerateInput, UnsupportedArity, ZeroPolynomial
from torus_stab.factor import (
    BinomialFactor,
    binomial_factors,
    candidate_directions,
    coprime_certificate,
    cyclotomic_roots,
    gcd_power_split,
    mgcd,
    resultant,
    strip_binomials,
    sylvester_resultant,
    t0_c0,
)
from torus_stab.laurent import LaurentPoly, divides, monomial_normalize, power_substitute, similar, total_degree
from torus_stab.parse import parse_poly

from helpers import X, Y, from_sympy, to_sympy
from strategies import polys

P = parse_poly
R0 = RootOfUnity(F(0))


def test_mgcd_examples():
    assert mgcd(P("(x*y-1)*(x+y+1)"), P("(x*y-1)*(x-y)")) == P("x*y-1")
    f = P("3*x^2*y+6*x*y^2-3")
    assert mgcd(f, f) == monomial_normalize(f)
    assert mgcd(P("x+y+1"), P("x-y")) == P("1")
    with pytest.raises(ZeroPolynomial):
        mgcd(LaurentPoly.zero(2), P("x"))
    with pytest.raises(UnsupportedArity):
        mgcd(P("x1+x4", 4), P("x1-x4", 4))


@given(polys(max_terms=4, maxdeg=2), polys(max_terms=4, maxdeg=2), polys(max_terms=3, maxdeg=2))
def test_mgcd_against_sympy(a, b, c):
    f, g = a * c, b * c
    got = mgcd(f, g)
    assert divides(got, f) and divides(got, g)
    ref = from_sympy(sympy.gcd(to_sympy(f), to_sympy(g)), 2)
    assert similar(got, ref)


@given(polys(nvars=3, max_terms=3, maxdeg=2), polys(nvars=3, max_terms=3, maxdeg=2), polys(nvars=3, max_terms=3, maxdeg=1))
def test_mgcd_three_variables(a, b, c):
    f, g = a * c, b * c
    got = mgcd(f, g)
    assert divides(got, f) and divides(got, g)
    from torus_stab.laurent import divide

    assert mgcd(divide(f, got), divide(g, got)).is_constant()


def test_mgcd_cyclotomic_coefficients():
    f = P("(x - w(3,1)*y)*(x + y + 1)")
    g = P("(x - w(3,1)*y)*(x - w(5,2))")
    assert mgcd(f, g) == P("x - w(3,1)*y")


def test_resultant_examples():
    assert resultant(P("x*y-1"), P("x+y+1"), 1) == P("x^2+x+1")
    assert resultant(P("y-1"), P("y+1"), 1) in (P("2"), P("-2"))
    assert resultant(P("x*y-1"), P("x*y-1"), 1) == LaurentPoly.zero(2)
    with pytest.raises(DegenerateInput):
        resultant(P("x+1"), P("x*y-1"), 1)


@given(polys(max_terms=4, maxdeg=3), polys(max_terms=4, maxdeg=3))
def test_resultant_against_sympy(f, g):
    f, g = f.clear_negative(), g.clear_negative()
    if not f.uses(1) or not g.uses(1):
        return
    got = resultant(f, g, 1)
    # sympy.resultant can differ in sign from the Sylvester determinant; compare with the determinant
    ref = sylvester(to_sympy(f), to_sympy(g), Y).det()
    assert to_sympy(got) == sympy.expand(ref)
    assert sylvester_resultant(f, g, 1) == got


@given(polys(max_terms=3, maxdeg=2), polys(max_terms=3, maxdeg=2), polys(max_terms=3, maxdeg=2))
def test_resultant_vanishes_iff_common_factor(a, b, c):
    for f, g in ((a, b), (a * c, b * c)):
        f, g = f.clear_negative(), g.clear_negative()
        if not f.uses(1) or not g.uses(1):
            continue
        r = resultant(f, g, 1)
        # Y itself is a unit in the Laurent ring but still a common polynomial factor
        both_y = f.min_degree(1) > 0 and g.min_degree(1) > 0
        assert (not r) == (both_y or mgcd(f, g).clear_negative().degree(1) > 0)


def test_cyclotomic_roots_examples():
    w = lambda q: RootOfUnity(F(q))
    assert cyclotomic_roots(P("x^2+x+1", 1)) == [(w(F(1, 3)), 1), (w(F(2, 3)), 1)]
    assert cyclotomic_roots(P("x^2-2", 1)) == []
    assert cyclotomic_roots(P("x^3-1", 1)) == [(w(0), 1), (w(F(1, 3)), 1), (w(F(2, 3)), 1)]
    assert cyclotomic_roots(P("(x-1)^3*(x+1)", 1)) == [(w(0), 3), (w(F(1, 2)), 1)]
    assert cyclotomic_roots(P("x - w(7,3)", 1)) == [(w(F(3, 7)), 1)]
    with pytest.raises(ZeroPolynomial):
        cyclotomic_roots(LaurentPoly.zero(1))


def _phi(n):
    return LaurentPoly(1, {(i,): CycNum.rational(c) for i, c in enumerate(cyclotomic_poly(n)) if c})


@given(st.lists(st.integers(1, 30), min_size=1, max_size=3), polys(nvars=1, max_terms=3, maxdeg=4))
def test_cyclotomic_roots_complete(orders, cofactor):
    f = cofactor
    for n in orders:
        f = f * _phi(n)
    got = dict(cyclotomic_roots(f))
    base = dict(cyclotomic_roots(cofactor)) if not cofactor.is_constant() else {}
    for n in set(orders):
        for k in range(n):
            if sympy.gcd(k, n) == 1:
                w = RootOfUnity(F(k, n))
                assert got[w] == orders.count(n) + base.get(w, 0)
    # nothing spurious: every reported root is a root
    from torus_stab.laurent import evaluate_at_torsion

    for w in got:
        assert evaluate_at_torsion(f, (w,)).is_zero()


def test_binomial_factors_examples():
    got = binomial_factors(P("x^2*y^2-1"))
    assert [(b.a, b.zeta, b.multiplicity) for b in got] == [((1, 1), R0, 1), ((1, 1), RootOfUnity(F(1, 2)), 1)]
    got = binomial_factors(P("(x*y-1)*(x+y+1)"))
    assert [(b.a, b.zeta) for b in got] == [((1, 1), R0)]
    assert binomial_factors(P("x+y+1")) == []
    got = binomial_factors(P("(x*y-1)^2*(x-w(3,1))"))
    assert {(b.a, b.zeta, b.multiplicity) for b in got} == {((1, 1), R0, 2), ((1, 0), RootOfUnity(F(1, 3)), 1)}


@st.composite
def planted(draw, nvars=2):
    k = draw(st.integers(0, 2))
    out = []
    f = LaurentPoly.constant(CycNum.rational(1), nvars)
    for _ in range(k):
        a = tuple(draw(st.integers(-2, 2)) for _ in range(nvars))
        if not any(a):
            continue
        from math import gcd

        g = gcd(*a)
        a = tuple(x // g for x in a)
        m = draw(st.sampled_from([1, 2, 3, 4, 6, 7]))
        zeta = RootOfUnity(F(draw(st.integers(0, m - 1)), m))
        out.append((a, zeta))
        f = f * LaurentPoly.binomial(a, zeta.to_cyc())
    return f, out


@given(planted(), polys(max_terms=3, maxdeg=2))
def test_binomial_factors_after_strip(fp, tri):
    f, plants = fp
    f = f * tri
    if f.is_constant():
        return
    got = binomial_factors(f)
    d = total_degree(f)
    for b in got:
        assert divides(b.poly() ** b.multiplicity, f)
        assert sum(x * x for x in b.a) <= 4 * d * d
    rest = strip_binomials(f, got)
    assert binomial_factors(rest) == [] if not rest.is_constant() else True
    keys = {b.key() for b in got}
    for a, zeta in plants:
        from torus_stab.laurent import is_binomial

        s = is_binomial(LaurentPoly.binomial(a, zeta.to_cyc()))
        assert (s.a, s.zeta) in keys


def test_t0_c0():
    assert t0_c0(2, 3) == (5, 11)
    assert t0_c0(2, 1) == (0, 0)
    assert t0_c0(2, 2) == (3, 5)
    assert t0_c0(3, 4) == (4, 16)


def test_gcd_power_split_examples():
    s = gcd_power_split(P("(x*y-1)*(x+y+1)"), 2)
    assert s.t1 == 5 and s.g == P("x*y-1")
    assert [(b.a, b.zeta, b.cert) for b in s.binomials] == [((1, 1), R0, (0, 1))]
    s = gcd_power_split(P("x-1", 1), 2)
    assert s.t1 == 0 and s.g == P("x-1", 1)
    assert [(b.a, b.zeta, b.cert) for b in s.binomials] == [((1,), R0, (0, 1))]
    s = gcd_power_split(P("x+y+1"), 2)
    assert s.g == P("1") and s.binomials == []
    a, b = s.cofactors
    assert a == P("x+y+1") and b == P("x^2+y^2+1")


def test_coprime_certificate():
    assert coprime_certificate(P("x+y+1"), P("x-y")) is True
    assert coprime_certificate(P("(x+y+1)*(x-2)"), P("(x+y+1)*y")) is not True


def test_coprime_certificate_high_degree():
    f = P("x^2*y + x + 3*y^2 + 1")
    assert coprime_certificate(f, power_substitute(f, 2, 12)) is True
    g = P("x - w(5,2)*y")
    assert coprime_certificate(g, g * power_substitute(f, 3, 8)) is not True
    assert coprime_certificate(P("x^2+x+1", 1), P("x^4+x^2+1", 1)) is False
    assert coprime_certificate(P("x^2+x+1", 1), power_substitute(P("x-2", 1), 2, 20)) is True


@given(polys(max_terms=3, maxdeg=2), polys(max_terms=3, maxdeg=2), polys(max_terms=3, maxdeg=2))
def test_coprime_certificate_sound(a, b, c):
    # True must never be returned for a pair that shares a factor
    if c.clear_denominators().is_constant():
        return
    assert coprime_certificate(a * c, b * c) is not True
    got = coprime_certificate(a, b)
    if got is True:
        assert mgcd(a.clear_denominators(), b.clear_denominators()).is_constant()


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8), st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_modp_helpers_against_sympy(a, b):
    from torus_stab import _upoly as U

    p = 1000003
    x = sympy.Symbol("x")
    pa, pb = sympy.Poly(list(reversed(a)), x, modulus=p), sympy.Poly(list(reversed(b)), x, modulus=p)
    g = U.gcd_modp(a, b, p)
    ref = sympy.gcd(pa, pb)
    assert len(g) - 1 == max(ref.degree(), 0) if g else ref.is_zero
    if any(x % p for x in b):
        bt = U._trim_p([x % p for x in b])
        r = U.rem_modp(a, bt, p)
        ref = pa.rem(pb)
        assert [c % p for c in reversed(ref.all_coeffs())] == r or (not r and ref.is_zero)
        big = {e: (e + 1) % p for e in (0, 7, 60, 250)}
        got = U.sparse_mod_modp(big, bt, p)
        full = sympy.Poly(sum(c * x ** e for e, c in big.items()), x, modulus=p).rem(pb)
        assert [c % p for c in reversed(full.all_coeffs())] == got or (not got and full.is_zero)


def test_candidate_directions():
    assert candidate_directions(P("x+y+1")) == [(0, 1), (1, -1), (1, 0)]
    assert candidate_directions(P("x*y-1")) == [(1, 1)]
    assert candidate_directions(P("x^2-1", 1)) == [(1,)]
    assert candidate_directions(P("x1+x2+x3", 3)) == [(0, 1, -1), (1, -1, 0), (1, 0, -1)]
