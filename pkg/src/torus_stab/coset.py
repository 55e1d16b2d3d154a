"""Torsion points, torsion cosets, their orbits under the z-th power map, and containment tests.

A torsion coset is stored as (A, c): A is a primitive integer lattice in row Hermite
normal form and c_i in [0, 1) are the exponents of the values x^(a_i) = exp(2 pi i c_i)
that the coset imposes.  The pair is a canonical form, so coset equality is tuple equality.
Every torsion coset, not just its defining lattice, maps onto omega^z H under the power map
because the power map is surjective on the subtorus H.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cyclo import RootOfUnity, lcm
from .errors import DimensionMismatch, NotPrimitive, ZeroPolynomial
from .lattice import extend_lattice_basis, hnf, identity, primitive_closure
from .laurent import LaurentPoly, evaluate_at_torsion, is_binomial, monoidal_image


def _mod1(q) -> Fraction:
    q = Fraction(q)
    return q - (q.numerator // q.denominator)


@dataclass(frozen=True, order=True)
class TorsionPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(w if isinstance(w, RootOfUnity) else RootOfUnity(Fraction(w)) for w in self.coords)
        )

    @classmethod
    def of(cls, *exps) -> "TorsionPoint":
        return cls(tuple(RootOfUnity(Fraction(e)) for e in exps))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def exponents(self) -> tuple:
        return tuple(w.exponent for w in self.coords)

    @property
    def order(self) -> int:
        m = 1
        for w in self.coords:
            m = lcm(m, w.order)
        return m

    def power(self, z: int) -> "TorsionPoint":
        return TorsionPoint(tuple(w ** z for w in self.coords))

    def __str__(self):
        return "(" + ", ".join(str(w) for w in self.coords) + ")"


@dataclass(frozen=True, order=True)
class TorsionCoset:
    nvars: int
    lattice: tuple
    values: tuple

    @classmethod
    def from_point(cls, p: Union[TorsionPoint, Sequence]) -> "TorsionCoset":
        if not isinstance(p, TorsionPoint):
            p = TorsionPoint(tuple(p))
        return cls(p.n, identity(p.n), p.exponents)

    @classmethod
    def from_lattice(cls, rows, values) -> "TorsionCoset":
        """The coset {x : x^(a_i) = exp(2 pi i v_i)} for a primitive lattice with rows a_i."""
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if not rows:
            raise DimensionMismatch("a coset needs at least one defining character")
        n = len(rows[0])
        values = [_mod1(v.exponent if isinstance(v, RootOfUnity) else v) for v in values]
        if len(values) != len(rows):
            raise DimensionMismatch("one value per lattice row is required")
        h, u = hnf(rows)
        h = tuple(r for r in h if any(r))
        if len(h) != len(rows):
            raise NotPrimitive("lattice rows are dependent")
        if primitive_closure(rows) != h:
            raise NotPrimitive("the lattice is not primitive")
        new = tuple(_mod1(sum((x * v for x, v in zip(urow, values)), Fraction(0))) for urow in u[: len(h)])
        return cls(n, h, new)

    @classmethod
    def from_binomials(cls, polys: Sequence[LaurentPoly]) -> "TorsionCoset":
        rows, vals = [], []
        for f in polys:
            shape = is_binomial(f)
            if shape is None or shape.m != 1:
                raise ValueError(f"{f} is not of the form X^a - zeta with a primitive")
            rows.append(shape.a)
            vals.append(shape.zeta.exponent)
        return cls.from_lattice(rows, vals)

    @property
    def rank(self) -> int:
        return len(self.lattice)

    @property
    def dim(self) -> int:
        return self.nvars - self.rank

    def basis(self):
        return extend_lattice_basis(self.lattice)

    @property
    def omega(self) -> TorsionPoint:
        """A representative torsion point: B^-1 applied to (c, 0, ..., 0)."""
        inv = self.basis().inverse
        vec = list(self.values) + [Fraction(0)] * self.dim
        return TorsionPoint(tuple(RootOfUnity(sum((x * v for x, v in zip(row, vec)), Fraction(0))) for row in inv))

    def point(self) -> TorsionPoint:
        if self.dim:
            raise ValueError("not a point")
        return TorsionPoint(tuple(RootOfUnity(v) for v in self.values))

    def contains_point(self, p: TorsionPoint) -> bool:
        qs = p.exponents
        return all(_mod1(sum((x * q for x, q in zip(a, qs)), Fraction(0)) - c) == 0 for a, c in zip(self.lattice, self.values))

    def contains_coset(self, other: "TorsionCoset") -> bool:
        """other is a subset of self."""
        if other.dim > self.dim:
            return False
        if not self.contains_point(other.omega):
            return False
        # the lattice of self must lie in the lattice of other
        span = primitive_closure(other.lattice)
        sub = hnf(list(span) + list(self.lattice))[0]
        return tuple(r for r in sub if any(r)) == span

    def __str__(self):
        if self.dim == 0:
            return str(self.point())
        return " & ".join(str(b) + " = 0" for b in coset_defining_binomials(self))

    def to_json(self) -> dict:
        return {
            "omega": [str(q) for q in self.omega.exponents],
            "lattice": [list(r) for r in self.lattice],
            "dim": self.dim,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TorsionCoset":
        omega = [Fraction(q) for q in obj["omega"]]
        rows = obj["lattice"]
        vals = [sum((x * q for x, q in zip(r, omega)), Fraction(0)) for r in rows]
        return cls.from_lattice(rows, vals)


Item = Union[TorsionPoint, TorsionCoset]


def as_coset(c: Item) -> TorsionCoset:
    return c if isinstance(c, TorsionCoset) else TorsionCoset.from_point(c)


def power_image(c: Item, z: int) -> Item:
    """omega^z H for omega H; points map to points."""
    if isinstance(c, TorsionPoint):
        return c.power(z)
    return TorsionCoset(c.nvars, c.lattice, tuple(_mod1(v * z) for v in c.values))


@dataclass(frozen=True)
class OrbitCert:
    preperiod: int
    period: int
    orbit: tuple

    def to_json(self) -> dict:
        return {
            "preperiod": self.preperiod,
            "period": self.period,
            "orbit": [o.to_json() if isinstance(o, TorsionCoset) else [str(q) for q in o.exponents] for o in self.orbit],
        }


def orbit(c: Item, z: int) -> OrbitCert:
    if z < 2:
        raise ValueError("z must be at least 2")
    seen = {}
    items = []
    cur = c
    while cur not in seen:
        seen[cur] = len(items)
        items.append(cur)
        cur = power_image(cur, z)
    k = seen[cur]
    return OrbitCert(k, len(items) - k, tuple(items))


def coset_contained_in(c: Item, f: LaurentPoly) -> bool:
    """Every point of c lies on Z(f)."""
    if not f:
        raise ZeroPolynomial("containment in the zero set of the zero polynomial is trivial")
    if isinstance(c, TorsionPoint):
        if c.n != f.nvars:
            raise DimensionMismatch(f"point in {c.n} variables, polynomial in {f.nvars}")
        return not evaluate_at_torsion(f, c.coords)
    if c.nvars != f.nvars:
        raise DimensionMismatch(f"coset in {c.nvars} variables, polynomial in {f.nvars}")
    if c.dim == 0:
        return not evaluate_at_torsion(f, c.point().coords)
    if c.rank == 0:
        return False
    g = monoidal_image(f, c.basis())
    for v in c.values:
        g = g.specialize(0, RootOfUnity(v).to_cyc())
    return not g


def is_stable(c: Item, V: Sequence[LaurentPoly], z: int, cert: Optional[OrbitCert] = None) -> tuple:
    """(True, None) if every orbit element lies in every Z(f); otherwise (False, (t, f))."""
    cert = cert or orbit(c, z)
    for t, item in enumerate(cert.orbit):
        for f in V:
            if not coset_contained_in(item, f):
                return False, (t, f)
    return True, None


def coset_defining_binomials(c: Item) -> list:
    c = as_coset(c)
    return [LaurentPoly.binomial(a, RootOfUnity(v).to_cyc()) for a, v in zip(c.lattice, c.values)]
