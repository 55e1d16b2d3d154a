"""Stable subvarieties of the z-th power map.

Torsion cosets on plane curves are found with the seven transforms
f(eX^k, dY^k), e, d in {1, -1}, k in {1, 2}: every torsion point of a curve with
rational coefficients is a common zero of f and one of them.  Stability of a
candidate is decided exactly from its finite orbit.
"""
from __future__ import annotations

import logging
from itertools import product
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import _upoly as U
from .coset import OrbitCert, _mod1, TorsionCoset, TorsionPoint, coset_contained_in, is_stable, orbit
from .cyclo import RootOfUnity, certify_order_form
from .errors import DimensionMismatch, LemmaViolation, MonomialInput, UnsupportedArity, ZeroPolynomial
from .factor import (
    BinomialFactor,
    binomial_factors,
    coprime_certificate,
    cyclotomic_roots,
    gcd_power_split,
    mgcd,
    resultant,
    strip_binomials,
)
from .lattice import UniBasis, extend_lattice_basis, extend_to_unimodular, matmul
from .laurent import LaurentPoly, divide, monoidal_image, monomial_normalize, newton_polygon, power_substitute, similar, total_degree

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Variety:
    polys: tuple

    def __init__(self, polys):
        polys = tuple(polys) if not isinstance(polys, LaurentPoly) else (polys,)
        if not polys:
            raise ValueError("a variety needs at least one polynomial")
        n = polys[0].nvars
        for f in polys:
            if not f:
                raise ZeroPolynomial("zero polynomial in a variety")
            if f.nvars != n:
                raise DimensionMismatch("polynomials have different numbers of variables")
        object.__setattr__(self, "polys", polys)

    @property
    def nvars(self) -> int:
        return self.polys[0].nvars

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)


def _polys(V) -> tuple:
    return V.polys if isinstance(V, Variety) else Variety(V).polys


@dataclass
class StableResult:
    cosets: list
    certs: list
    complete: bool
    z: int = 0

    def points(self) -> list:
        return [c.point() for c in self.cosets if c.dim == 0]

    def positive_dimensional(self) -> list:
        return [c for c in self.cosets if c.dim > 0]

    def to_json(self) -> dict:
        return {
            "z": self.z,
            "complete": self.complete,
            "cosets": [
                dict(c.to_json(), certificate=cert.to_json()) for c, cert in zip(self.cosets, self.certs)
            ],
        }


def _result(items, z: int, complete: bool) -> StableResult:
    uniq = sorted(set(items), key=lambda c: (-c.dim, c.lattice, c.values))
    keep = [c for c in uniq if not any(o != c and o.dim > c.dim and o.contains_coset(c) for o in uniq)]
    return StableResult(keep, [orbit(c, z) for c in keep], complete, z)


# ---------------------------------------------------------------------------
# the V(z, u) chain


def v_chain(V, z: int, u: int) -> Variety:
    polys = _polys(V)
    return Variety([power_substitute(f, z, t) for f in polys for t in range(u + 1)])


# ---------------------------------------------------------------------------
# one variable


def stable_dim1(f: LaurentPoly, z: int) -> StableResult:
    """Roots of unity whose whole forward orbit stays among the roots of f."""
    if f.nvars != 1:
        raise DimensionMismatch("stable_dim1 expects a univariate polynomial")
    if not f:
        raise ZeroPolynomial("zero polynomial")
    if f.is_monomial():
        raise MonomialInput("a monomial has no zeros in the torus")
    d = total_degree(f.clear_denominators())
    out = []
    for w, _ in cyclotomic_roots(f):
        c = TorsionCoset.from_point(TorsionPoint((w,)))
        if is_stable(c, [f], z)[0]:
            if certify_order_form(w, z, d, d) is None:
                raise LemmaViolation(f"stable root {w} has no order certificate with k, l <= {d}")
            out.append(c)
    return _result(out, z, True)


# ---------------------------------------------------------------------------
# torsion cosets on plane curves


def rational_norm(f: LaurentPoly) -> LaurentPoly:
    """Product of the Galois conjugates of f; a polynomial with rational coefficients."""
    m = f.conductor
    if m == 1:
        return f
    out = LaurentPoly.constant(1, f.nvars)
    for k in range(1, m):
        if _coprime(k, m):
            out = out * f.galois(k)
    return out


def _coprime(a: int, b: int) -> bool:
    while b:
        a, b = b, a % b
    return a == 1


_TRANSFORMS = tuple(
    (eps, dlt, e) for e in (1, 2) for eps in (1, -1) for dlt in (1, -1) if (eps, dlt, e) != (1, 1, 1)
)


def _transform(g: LaurentPoly, eps: int, dlt: int, e: int) -> LaurentPoly:
    terms = {}
    for (i, j), c in g.terms.items():
        s = (eps ** (i % 2)) * (dlt ** (j % 2))
        terms[(e * i, e * j)] = c if s == 1 else -c
    return LaurentPoly._make(2, terms)


def _pull_back(ub: UniBasis, yexps: Sequence[Fraction]) -> TorsionPoint:
    """The point x with psi_B(x) = y, i.e. exponent vector B^-1 y."""
    inv = ub.inverse
    return TorsionPoint(tuple(RootOfUnity(sum((a * q for a, q in zip(row, yexps)), Fraction(0))) for row in inv))


def points_on_line(f: LaurentPoly, a: Sequence[int], zeta: RootOfUnity) -> list:
    """Torsion points of Z(f) on the coset X^a = zeta (which must not lie inside Z(f))."""
    ub = extend_to_unimodular(a)
    h = monoidal_image(f, ub).specialize(0, zeta.to_cyc())
    if not h:
        raise ValueError("the coset lies inside the curve")
    return [_pull_back(ub, (zeta.exponent, w.exponent)) for w, _ in cyclotomic_roots(h)]


def _univariate_roots(p: LaurentPoly) -> list:
    if not p or p.is_constant():
        return []
    return [w for w, _ in cyclotomic_roots(p)]


def common_points(q: LaurentPoly, p: LaurentPoly) -> set:
    """Torsion points common to two coprime bivariate polynomials."""
    q, p = q.clear_denominators(), p.clear_denominators()
    if q.is_constant() or p.is_constant():
        return set()
    out = set()
    if not q.uses(1) or not p.uses(1):
        if not q.uses(1) and not p.uses(1):
            return out
        u, other = (q, p) if not q.uses(1) else (p, q)
        for x0 in _univariate_roots(u.drop_var(1)):
            for y0 in _univariate_roots(other.specialize(0, x0.to_cyc())):
                out.add(TorsionPoint((x0, y0)))
        return out
    r = resultant(q, p, 1)
    if not r:
        raise LemmaViolation("coprime curves have a vanishing resultant")
    for x0 in _univariate_roots(r.drop_var(1)):
        a = U.from_laurent(q.specialize(0, x0.to_cyc()))
        b = U.from_laurent(p.specialize(0, x0.to_cyc()))
        g = U.gcd(a, b) if a and b else (a or b)
        for y0 in _univariate_roots(U.to_laurent(g)):
            out.add(TorsionPoint((x0, y0)))
    return out


def _is_unit(p: LaurentPoly) -> bool:
    return p.clear_denominators().is_constant()


@lru_cache(maxsize=512)
def _rational_torsion_points(g: LaurentPoly) -> frozenset:
    """Torsion points on Z(g), for g with rational coefficients and no binomial factor."""
    g = monomial_normalize(g)
    if g.is_constant():
        return frozenset()
    if newton_polygon(g).area == 0:
        return frozenset()
    for eps, dlt, e in _TRANSFORMS[:3]:
        if similar(_transform(g, eps, dlt, e), g):
            return _sublattice_points(g, (int(eps < 0), int(dlt < 0)))
    pts = set()
    for eps, dlt, e in _TRANSFORMS:
        gt = _transform(g, eps, dlt, e)
        if coprime_certificate(g, gt):
            pts |= common_points(g, gt)
            continue
        h = mgcd(g, gt)
        if _is_unit(h):
            pts |= common_points(g, gt)
            continue
        if e == 2 and similar(h, g):
            raise LemmaViolation(f"{g} divides its own squaring transform")
        q = g
        while True:
            c = mgcd(q, h)
            if _is_unit(c):
                break
            q = _div(q, c)
        pts |= _rational_torsion_points(h)
        pts |= common_points(q, gt)
    return frozenset(pts)


def _div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    q = divide(f, g)
    if q is None:
        raise ArithmeticError("inexact division")
    return q


def _sublattice_points(g: LaurentPoly, s: tuple) -> frozenset:
    """g(Y) in coordinates where it only involves Y1^2; solve the halved curve and take square roots."""
    w = extend_to_unimodular(s)
    b = UniBasis(w.polar, w.basis)  # columns of B^-1 start with s
    gb = monoidal_image(g, b).clear_denominators()
    if any(e[0] % 2 for e in gb.terms):
        raise LemmaViolation("parity reduction failed")
    half = LaurentPoly._make(2, {(e[0] // 2, e[1]): c for e, c in gb.terms.items()})
    bf = binomial_factors(half)
    if bf:
        raise LemmaViolation("binomial factor appeared after parity reduction")
    out = set()
    for p in _rational_torsion_points(half):
        u, v = p.exponents
        for j in (0, 1):
            out.add(_pull_back(b, (u / 2 + Fraction(j, 2), v)))
    return frozenset(out)


def _check_curve(f: LaurentPoly):
    if not f:
        raise ZeroPolynomial("zero polynomial")
    if f.nvars != 2:
        raise DimensionMismatch("expected a polynomial in two variables")
    if f.is_monomial():
        raise MonomialInput("a monomial has no zeros in the torus")


def torsion_cosets_curve(f: LaurentPoly) -> list:
    """All torsion cosets on Z(f) in G_m^2: one-dimensional cosets first, then isolated points."""
    _check_curve(f)
    lines = [TorsionCoset.from_lattice([bf.a], [bf.zeta.exponent]) for bf in binomial_factors(f)]
    norm = rational_norm(f)
    nbf = binomial_factors(norm)
    own = {(c.lattice, c.values) for c in lines}
    g = strip_binomials(norm, nbf)
    cands = set(_rational_torsion_points(monomial_normalize(g)))
    for bf in nbf:
        c = TorsionCoset.from_lattice([bf.a], [bf.zeta.exponent])
        if (c.lattice, c.values) in own:
            continue
        cands.update(points_on_line(f, bf.a, bf.zeta))
    pts = []
    for p in cands:
        if any(line.contains_point(p) for line in lines):
            continue
        if coset_contained_in(p, f):
            pts.append(TorsionCoset.from_point(p))
    return sorted(set(lines)) + sorted(set(pts))


# ---------------------------------------------------------------------------
# stable sets of plane curves


def _stable_points_on_line(line: TorsionCoset, V: Sequence[LaurentPoly], z: int, cert: OrbitCert, witness) -> set:
    """Stable torsion points on a line whose t-th image leaves Z(f)."""
    t, f = witness
    image = cert.orbit[t]
    ub = line.basis()
    h = monoidal_image(f, ub).specialize(0, RootOfUnity(image.values[0]).to_cyc())
    zt = z ** t
    out = set()
    for w, _ in cyclotomic_roots(h):
        for j in range(zt):
            p = _pull_back(ub, (line.values[0], (w.exponent + j) / zt))
            if is_stable(p, V, z)[0]:
                out.add(p)
    return out


def stable_curve(V, z: int) -> StableResult:
    """The maximal (z, V)-stable subvariety for V in G_m^2, as torsion cosets."""
    polys = _polys(V)
    if polys[0].nvars != 2:
        raise DimensionMismatch("stable_curve expects polynomials in two variables")
    if z < 2:
        raise ValueError("z must be at least 2")
    for f in polys:
        _check_curve(f)
    base = min(polys, key=lambda f: (total_degree(f), len(f)))
    cands = torsion_cosets_curve(base)
    stable = []
    points = set()
    for c in cands:
        cert = orbit(c, z)
        ok, wit = is_stable(c, polys, z, cert)
        if ok:
            stable.append(c)
        elif c.dim == 1:
            points |= _stable_points_on_line(c, polys, z, cert, wit)
    stable.extend(TorsionCoset.from_point(p) for p in points)
    return _result(stable, z, True)


def stable_set(V, z: int, limits: Optional[Limits] = None) -> StableResult:
    """Dispatch on the number of variables; results for n >= 3 carry complete=False."""
    polys = _polys(V)
    n = polys[0].nvars
    if z < 2:
        raise ValueError("z must be at least 2")
    if n == 1:
        cands = set()
        for f in polys:
            cands.update(stable_dim1(f, z).cosets)
        return _result([c for c in cands if is_stable(c, polys, z)[0]], z, True)
    if n == 2:
        return stable_curve(polys, z)
    return stable_general(polys, z, limits)


# ---------------------------------------------------------------------------
# restriction to binomial cosets


def restrict_to_coset(f: LaurentPoly, b: BinomialFactor, z: int) -> list:
    """[(W_i, z^l)] with W_i = f^B(zeta^(z^(k+i)), Y_2^(z^(k+i)), ...), i < l."""
    if f.nvars < 2:
        raise DimensionMismatch("restriction needs at least two variables")
    if b.cert is None:
        raise ValueError("binomial factor has no order certificate")
    k, l = b.cert
    fb = monoidal_image(f, extend_to_unimodular(b.a))
    out = []
    for i in range(l):
        s = z ** (k + i)
        w = fb.specialize(0, (b.zeta ** s).to_cyc())
        out.append((power_substitute(w, s, 1) if s > 1 else w, z ** l))
    return out


def restrict_poly(f: LaurentPoly, c: TorsionCoset) -> tuple:
    """(B, h): h(Y_{r+1}, ..., Y_n) is f on the coset in coordinates of the completed basis B."""
    ub = c.basis()
    g = monoidal_image(f, ub)
    for v in c.values:
        g = g.specialize(0, RootOfUnity(v).to_cyc())
    return ub, g


def lift_coset(ub: UniBasis, values: Sequence[Fraction], sub: TorsionCoset) -> TorsionCoset:
    """Coset of G_m^n given in Y-coordinates by Y_i = e(values_i), i < r, and `sub` on the rest."""
    r = len(values)
    n = ub.n
    rows = [tuple(int(i == j) for j in range(n)) for i in range(r)]
    rows += [(0,) * r + tuple(a) for a in sub.lattice]
    vals = list(values) + list(sub.values)
    return TorsionCoset.from_lattice(matmul(rows, ub.basis), vals)


# ---------------------------------------------------------------------------
# three or more variables (best effort)


@dataclass
class Limits:
    max_depth: int = 4
    max_projection_degree: int = 12


def stable_general(V, z: int, limits: Optional[Limits] = None) -> StableResult:
    """Stable torsion cosets for n >= 3 without an exhaustiveness certificate."""
    polys = _polys(V)
    if polys[0].nvars < 3:
        raise DimensionMismatch("stable_general expects at least three variables")
    limits = limits or Limits()
    cands = _general_candidates(polys, z, limits, 0)
    good = [c for c in cands if is_stable(c, polys, z)[0]]
    return _result(good, z, False)


def _stable_any(polys: Sequence[LaurentPoly], z: int, limits: Limits, depth: int) -> list:
    n = polys[0].nvars
    polys = [f for f in polys if f]
    if not polys:
        return [TorsionCoset(n, (), ())]
    if any(f.clear_denominators().is_constant() for f in polys):
        return []
    if n == 1:
        res = stable_dim1(polys[0], z)
        return [c for c in res.cosets if is_stable(c, polys, z)[0]]
    if n == 2:
        return stable_curve(polys, z).cosets
    cands = _general_candidates(polys, z, limits, depth)
    return [c for c in cands if is_stable(c, polys, z)[0]]


def _general_candidates(polys: Sequence[LaurentPoly], z: int, limits: Limits, depth: int) -> set:
    if depth > limits.max_depth:
        raise UnsupportedArity("recursion depth limit reached")
    n = polys[0].nvars
    if n > 3 + limits.max_depth:
        raise UnsupportedArity(f"{n} variables exceed the configured limits")
    cands = set()
    f = min(polys, key=lambda p: (total_degree(p), len(p)))
    # hypersurface cosets and the stable parts of the others
    for bf in binomial_factors(f):
        c = TorsionCoset.from_lattice([bf.a], [bf.zeta.exponent])
        cands.add(c)
        cands |= _inside_coset(c, polys, z, limits, depth)
    # projection of the part off the binomial gcd
    if n <= 3:
        try:
            split = gcd_power_split(f, z)
        except (LemmaViolation, UnsupportedArity) as exc:
            log.debug("gcd split unavailable: %s", exc)
            split = None
        if split is not None:
            a, b = split.cofactors
            cands |= _projected(polys, a, b, z, limits, depth)
    return cands


def _inside_coset(c: TorsionCoset, polys, z: int, limits: Limits, depth: int) -> set:
    """Stable cosets contained in the orbit-compatible part of a hypersurface coset."""
    cert = orbit(c, z)
    out = set()
    k, l = cert.preperiod, cert.period
    ub = c.basis()
    zeta = RootOfUnity(c.values[0])
    # points y of the periodic coset with y^(z^(jl+i)) on every restricted polynomial
    w = []
    for i in range(l):
        s = z ** i
        img = RootOfUnity(cert.orbit[k + i].values[0])
        for f in polys:
            h = monoidal_image(f, ub).specialize(0, img.to_cyc())
            w.append(power_substitute(h, s, 1) if s > 1 else h)
    for sub in _stable_any(w, z ** l, limits, depth + 1):
        for pre in _preimages(sub, z ** k):
            out.add(lift_coset(ub, [zeta.exponent], pre))
    return out


def _preimages(c: TorsionCoset, m: int) -> list:
    """All torsion cosets D with D^m = c (same lattice)."""
    if m == 1:
        return [c]
    if c.rank == 0:
        return [c]
    out = []
    for js in product(range(m), repeat=c.rank):
        out.append(TorsionCoset(c.nvars, c.lattice, tuple(_mod1((v + j) / m) for v, j in zip(c.values, js))))
    return out


def _projected(polys, a: LaurentPoly, b: LaurentPoly, z: int, limits: Limits, depth: int) -> set:
    n = a.nvars
    var = n - 1
    a, b = a.clear_denominators(), b.clear_denominators()
    if a.is_constant() or b.is_constant() or not a.uses(var) or not b.uses(var):
        return set()
    bound = a.degree(var) * total_degree(b) + b.degree(var) * total_degree(a)
    if bound > limits.max_projection_degree:
        log.debug("projection skipped: resultant degree bound %d", bound)
        return set()
    r = resultant(a, b, var).drop_var(var)
    if not r or r.clear_denominators().is_constant():
        return set()
    out = set()
    for d in _stable_any([r], z, limits, depth + 1):
        if d.rank == 0:
            continue
        rows = [tuple(x) + (0,) for x in d.lattice]
        cyl = TorsionCoset.from_lattice(rows, d.values)
        ub, h = restrict_poly(polys[0], cyl)
        if not h:
            out.add(cyl)
            continue
        if h.clear_denominators().is_constant():
            continue
        for sub in _torsion_cosets_any(h):
            out.add(lift_coset(ub, cyl.values, sub))
    return out


def _torsion_cosets_any(h: LaurentPoly) -> list:
    n = h.nvars
    if n == 1:
        return [TorsionCoset.from_point(TorsionPoint((w,))) for w, _ in cyclotomic_roots(h)]
    if n == 2:
        return torsion_cosets_curve(h)
    return [TorsionCoset.from_lattice([bf.a], [bf.zeta.exponent]) for bf in binomial_factors(h)]
