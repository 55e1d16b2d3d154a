import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from torus_stab import example, oracle
from torus_stab.coset import TorsionCoset, TorsionPoint, is_stable, orbit
from torus_stab.cyclo import RootOfUnity, certify_order_form
from torus_stab.errors import DimensionMismatch, MonomialInput, ZeroPolynomial
from torus_stab.factor import BinomialFactor
from torus_stab.laurent import LaurentPoly, evaluate_at_torsion, newton_polygon, total_degree
from torus_stab.parse import parse_poly
from torus_stab.stab import (
    Variety,
    restrict_to_coset,
    stable_curve,
    stable_dim1,
    stable_general,
    stable_set,
    torsion_cosets_curve,
    v_chain,
)

from strategies import polys

P = parse_poly
EX = P(example.CURVE)


def pt(*qs):
    return TorsionPoint.of(*(F(q) for q in qs))


def test_variety_validation():
    with pytest.raises(ValueError):
        Variety([])
    with pytest.raises(ZeroPolynomial):
        Variety([LaurentPoly.zero(2)])
    with pytest.raises(DimensionMismatch):
        Variety([P("x+1", 1), P("x+y")])


def test_v_chain_examples():
    assert v_chain([P("x+y+1")], 2, 1).polys == (P("x+y+1"), P("x^2+y^2+1"))
    assert v_chain([EX], 5, 0).polys == (EX,)
    assert v_chain([P("x*y-1")], 3, 2).polys == (P("x*y-1"), P("x^3*y^3-1"), P("x^9*y^9-1"))


def test_stable_dim1_examples():
    res = stable_dim1(P("x^2+x+1", 1), 2)
    assert res.points() == [pt(F(1, 3)), pt(F(2, 3))] and res.complete
    assert stable_dim1(P("x^2+x+1", 1), 3).cosets == []
    for z in (2, 3, 4):
        assert stable_dim1(P("x-1", 1), z).points() == [pt(0)]
    with pytest.raises(MonomialInput):
        stable_dim1(P("x^2", 1), 2)
    with pytest.raises(ZeroPolynomial):
        stable_dim1(LaurentPoly.zero(1), 2)


@given(polys(nvars=1, max_terms=4, maxdeg=6), st.integers(2, 4))
def test_stable_dim1_certificates(f, z):
    if f.clear_denominators().is_monomial():
        return
    d = total_degree(f.clear_denominators())
    res = stable_dim1(f, z)
    for c, cert in zip(res.cosets, res.certs):
        assert is_stable(c, [f], z)[0]
        w = c.point().coords[0]
        k, l = certify_order_form(w, z, d, d)
        assert (z ** k * (z ** l - 1)) % w.order == 0
    brute = oracle.brute_stable([f], z, 60)
    assert set(res.points()) == set(brute)


def test_torsion_cosets_curve_examples():
    got = torsion_cosets_curve(EX)
    assert all(c.dim == 0 for c in got)
    assert sorted(c.point() for c in got) == example.expected_points()
    got = torsion_cosets_curve(P("x+y+1"))
    assert sorted(c.point() for c in got) == [pt(F(1, 3), F(2, 3)), pt(F(2, 3), F(1, 3))]
    got = torsion_cosets_curve(P("x*y-w(5,1)"))
    assert got == [TorsionCoset.from_lattice([(1, 1)], [F(1, 5)])]
    with pytest.raises(MonomialInput):
        torsion_cosets_curve(P("x^2*y"))


def test_example_ratio():
    assert newton_polygon(EX).area == example.NEWTON_AREA
    assert F(len(example.expected_points())) / newton_polygon(EX).area == example.TORSION_RATIO


def test_stable_curve_examples():
    res = stable_curve([EX], 2)
    assert res.complete and not res.positive_dimensional()
    assert sorted(res.points()) == example.expected_stable()
    res = stable_curve([P("x+y+1")], 2)
    assert sorted(res.points()) == [pt(F(1, 3), F(2, 3)), pt(F(2, 3), F(1, 3))]
    for z in (2, 3, 5):
        res = stable_curve([P("x-1", 2)], z)
        assert res.cosets == [TorsionCoset.from_lattice([(1, 0)], [0])]


def test_stable_curve_demotes_lines():
    # the line XY = w3 is not stable under squaring, only the point where its orbit meets x = w3^k
    V = [P("(x*y-w(3,1))*(x - w(3,1))")]
    res = stable_curve(V, 4)
    for c, cert in zip(res.cosets, res.certs):
        assert is_stable(c, V, 4)[0]
    brute = oracle.brute_stable(V, 4, 36)
    assert res.positive_dimensional() or {p for p in res.points() if p.order <= 36} == set(brute)


def test_stable_curve_several_polynomials():
    V = [EX, P("x^2 - y")]
    res = stable_curve(V, 2)
    assert sorted(res.points()) == [p for p in example.expected_stable() if p.exponents[1] == 2 * p.exponents[0] % 1]
    assert set(res.points()) == set(oracle.brute_stable(V, 2, 30))


def test_restrict_to_coset_examples():
    b = BinomialFactor((1, 1), RootOfUnity(F(0)), 1, (0, 1))
    assert restrict_to_coset(P("x*y-1"), b, 2) == [(LaurentPoly.zero(1), 2)]
    b = BinomialFactor((1, 0), RootOfUnity(F(1, 3)), 1, (0, 2))
    (w0, e0), (w1, e1) = restrict_to_coset(P("x+y+1"), b, 2)
    assert e0 == e1 == 4
    assert evaluate_at_torsion(w0, (RootOfUnity(F(2, 3)),)).is_zero()
    assert w1 == P("x^2 - w(3,1)", 1)
    b = BinomialFactor((1, 0), RootOfUnity(F(0)), 1, (0, 1))
    (w0, e0), = restrict_to_coset(P("x^2+x*y+3"), b, 2)
    assert w0 == P("x+4", 1) and e0 == 2
    with pytest.raises(ValueError):
        restrict_to_coset(P("x+y"), BinomialFactor((1, 0), RootOfUnity(F(0))), 2)


def test_stable_general_examples():
    res = stable_general([P("x1*x2*x3-1", 3)], 2)
    assert not res.complete
    assert TorsionCoset.from_lattice([(1, 1, 1)], [0]) in res.cosets
    V = [P("(x1*x2*x3-1)*(x1+x2+x3)", 3)]
    res = stable_general(V, 2)
    assert TorsionCoset.from_lattice([(1, 1, 1)], [0]) in res.cosets
    for c in res.cosets:
        assert is_stable(c, V, 2)[0]
    V = [P("x1+x2+x3", 3)]
    res = stable_general(V, 2)
    for c in res.cosets:
        assert is_stable(c, V, 2)[0]
    with pytest.raises(DimensionMismatch):
        stable_general([EX], 2)


def test_stable_general_spot_check():
    V = [P("(x1*x2*x3-1)*(x1+x2+x3)", 3)]
    res = stable_general(V, 2)
    brute = oracle.brute_stable(V, 2, 10)
    line = TorsionCoset.from_lattice([(1, 1, 1)], [0])
    for p in brute:
        if line.contains_point(p):
            assert any(c.contains_point(p) for c in res.cosets)


def test_stable_set_dispatch():
    assert stable_set([P("x^2+x+1", 1)], 2).points() == [pt(F(1, 3)), pt(F(2, 3))]
    assert sorted(stable_set([EX], 2).points()) == example.expected_stable()
    assert not stable_set([P("x1*x2*x3-1", 3)], 2).complete


def _curve(rng):
    while True:
        terms = {}
        for i in range(5):
            for j in range(5 - i):
                if rng.random() < 0.35:
                    c = rng.randint(-2, 2)
                    if c:
                        terms[(i, j)] = c
        f = LaurentPoly(2, {e: c for e, c in terms.items()})
        if len(f) >= 2 and not f.is_monomial():
            return f


@pytest.mark.parametrize("seed", range(12))
def test_stable_curve_matches_oracle(seed):
    rng = random.Random(seed)
    f = _curve(rng)
    for z in (2, 3):
        res = stable_curve([f], z)
        for c in res.cosets:
            assert is_stable(c, [f], z)[0]
        got = set(p for p in res.points() if p.order <= 40)
        for c in res.positive_dimensional():
            got |= {p for p in oracle.enumerate_torsion_on([f], 40) if c.contains_point(p)}
        assert got == set(oracle.brute_stable([f], z, 40))


@pytest.mark.parametrize("src", ["x+y+1", "x^2+y^2+1", "(x*y-1)*(x+y+1)", example.CURVE, "x^2*y - 1 + x*y^2", "x^3+y^3+1"])
def test_census_matches_oracle(src):
    f = P(src)
    cos = torsion_cosets_curve(f)
    pts = oracle.enumerate_torsion_on([f], 60)
    for p in pts:
        assert any(c.contains_point(p) for c in cos)
    for c in cos:
        if c.dim == 0 and c.point().order <= 60:
            assert c.point() in pts


def test_chain_consistency_with_bounds():
    from torus_stab.bounds import bounds

    for src, z in (("x+y+1", 2), ("x^2+x*y+y^2+1", 3), (example.CURVE, 2)):
        f = P(src)
        u, sets = oracle.chain_stabilization([f], z, 30)
        res = stable_curve([f], z)
        expect = {p for p in res.points() if p.order <= 30}
        assert set(sets[-1]) == expect
        d = total_degree(f)
        assert u <= bounds(z, 2, d).T


def test_result_json():
    res = stable_curve([P("x+y+1")], 2)
    obj = res.to_json()
    assert obj["complete"] is True and len(obj["cosets"]) == 2
    assert obj["cosets"][0]["certificate"]["period"] == 2
