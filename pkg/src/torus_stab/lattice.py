"""Integer lattices: Hermite normal form, primitive closures, unimodular completion,
polar bases and Hermite constants."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DependentRows, NotPrimitive, ZeroVector

log = logging.getLogger(__name__)

IntMat = tuple  # tuple of row tuples


def as_matrix(rows) -> IntMat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a, b) -> IntMat:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def transpose(a) -> IntMat:
    return tuple(zip(*a))


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(m) -> tuple:
    """Row Hermite normal form: returns (H, U) with H = U*M and U unimodular."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, rows):
            if a[i][c]:
                x, y = a[r][c], a[i][c]
                g, s, t = _xgcd(x, y)
                p, q = x // g, y // g
                ar, ai = a[r], a[i]
                a[r] = [s * v + t * w for v, w in zip(ar, ai)]
                a[i] = [p * w - q * v for v, w in zip(ar, ai)]
                ur, ui = u[r], u[i]
                u[r] = [s * v + t * w for v, w in zip(ur, ui)]
                u[i] = [p * w - q * v for v, w in zip(ur, ui)]
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
            u[r] = [-v for v in u[r]]
        pv = a[r][c]
        for k in range(r):
            q = a[k][c] // pv
            if q:
                a[k] = [v - q * w for v, w in zip(a[k], a[r])]
                u[k] = [v - q * w for v, w in zip(u[k], u[r])]
        r += 1
    return as_matrix(a), as_matrix(u)


def rank(m) -> int:
    h, _ = hnf(m)
    return sum(1 for row in h if any(row))


def is_primitive(a: Sequence[int]) -> bool:
    if not any(a):
        raise ZeroVector("the zero vector has no primitivity")
    g = 0
    for x in a:
        g = gcd(g, x)
    return g == 1


def primitive_part(a: Sequence[int]) -> tuple:
    g = 0
    for x in a:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive part")
    return tuple(x // g for x in a)


def integer_kernel(m, n: int) -> IntMat:
    """Basis of {x in Z^n : M x = 0}; primitive by construction."""
    if not m:
        return identity(n)
    h, u = hnf(transpose(m))
    return tuple(u[i] for i in range(n) if not any(h[i]))


def primitive_closure(a) -> IntMat:
    """HNF basis of span_R(A) intersected with Z^n."""
    a = as_matrix(a)
    n = len(a[0])
    if rank(a) != len(a):
        raise DependentRows("rows are linearly dependent")
    kernel = integer_kernel(a, n)
    closure = integer_kernel(kernel, n) if kernel else identity(n)
    h, _ = hnf(closure)
    return tuple(row for row in h if any(row))


def inverse_unimodular(m) -> IntMat:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        r = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if r is None:
            raise DependentRows("singular matrix")
        aug[c], aug[r] = aug[r], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def determinant(m) -> int:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        r = next((r for r in range(c, n) if a[r][c] != 0), None)
        if r is None:
            return 0
        if r != c:
            a[c], a[r] = a[r], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


@dataclass(frozen=True)
class UniBasis:
    """Unimodular basis (rows) of Z^n together with its polar basis (rows of the inverse transpose)."""

    basis: IntMat
    polar: IntMat

    @classmethod
    def from_matrix(cls, m) -> "UniBasis":
        m = as_matrix(m)
        inv = inverse_unimodular(m)
        return cls(m, transpose(inv))

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def inverse(self) -> IntMat:
        return transpose(self.polar)

    def dual_check(self) -> bool:
        return matmul(self.basis, transpose(self.polar)) == identity(self.n)

    def polar_norms_sq(self) -> tuple:
        return tuple(sum(x * x for x in row) for row in self.polar)


def _sq(v) -> int:
    return sum(x * x for x in v)


def _reduce_polar(basis: list, polar: list, fixed: int) -> None:
    """Greedy integer shears row_i += k row_j (i >= fixed) until no polar row norm decreases."""
    n = len(basis)
    improved = True
    while improved:
        improved = False
        for i in range(fixed, n):
            pi = polar[i]
            ni = _sq(pi)
            for j in range(n):
                if j == i:
                    continue
                pj = polar[j]
                k = round(Fraction(sum(x * y for x, y in zip(pj, pi)), ni))
                if k == 0:
                    continue
                cand = [x - k * y for x, y in zip(pj, pi)]
                if _sq(cand) < _sq(pj):
                    polar[j] = cand
                    basis[i] = [x + k * y for x, y in zip(basis[i], basis[j])]
                    improved = True


def extend_lattice_basis(a) -> UniBasis:
    """Unimodular basis whose first r rows are the rows of the primitive r x n matrix A."""
    a = as_matrix(a)
    r, n = len(a), len(a[0])
    h, u = hnf(transpose(a))
    if any(any(h[i]) for i in range(r, n)) or rank(a) != r:
        raise DependentRows("rows are linearly dependent")
    top = [h[i][:r] for i in range(r)]
    if abs(determinant(top)) != 1:
        raise NotPrimitive("the row lattice is not primitive")
    w = transpose(inverse_unimodular(u))
    basis = [list(row) for row in a] + [list(w[i]) for i in range(r, n)]
    polar = [list(row) for row in transpose(inverse_unimodular(basis))]
    _reduce_polar(basis, polar, r)
    return UniBasis(as_matrix(basis), as_matrix(polar))


def extend_to_unimodular(a: Sequence[int]) -> UniBasis:
    """Unimodular basis with first row the primitive vector a, polar rows locally size-reduced."""
    a = tuple(int(x) for x in a)
    if not is_primitive(a):
        raise NotPrimitive(f"{a} is not primitive")
    ub = extend_lattice_basis((a,))
    report = polar_bound_report(ub)
    log.debug("polar bound check for %s: %s", a, report)
    return ub


# ---------------------------------------------------------------------------
# Hermite constants and the polar-basis norm bound

# gamma_n^n for the dimensions where the Hermite constant is known exactly
_HERMITE_POWERS = {
    1: Fraction(1),
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}


@dataclass(frozen=True)
class HermiteBound:
    """gamma_n described by the rational number gamma_n^n; `exact` is False when it is only an upper bound."""

    n: int
    power: Fraction
    exact: bool

    @property
    def value(self) -> float:
        return float(self.power) ** (1.0 / self.n) if self.n else 1.0


def hermite_constant(n: int) -> HermiteBound:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    if n == 0:
        return HermiteBound(0, Fraction(1), True)
    if n in _HERMITE_POWERS:
        return HermiteBound(n, _HERMITE_POWERS[n], True)
    # gamma_n <= (4/3)^((n-1)/2)
    return HermiteBound(n, Fraction(4, 3) ** (n * (n - 1) // 2), False)


def lemma_polar_bound(n: int, r: int, det_g: float) -> float:
    """1 + (n-1)/2 * gamma_{n-1}^{(n-1)/2} * gamma_{n-r}^{1/2} * det^{1/(n-r)}."""
    if not 1 <= r < n:
        raise ValueError("need 1 <= r < n")
    if det_g <= 0:
        raise ValueError("determinant must be positive")
    g1 = hermite_constant(n - 1)
    g2 = hermite_constant(n - r)
    return 1.0 + (n - 1) / 2.0 * math.sqrt(float(g1.power)) * math.sqrt(g2.value) * det_g ** (1.0 / (n - r))


def det_sublattice(a) -> tuple:
    """(sqrt(det(A A^T)) as float, det(A A^T) as exact integer)."""
    a = as_matrix(a)
    gram = matmul(a, transpose(a))
    d = determinant(gram)
    if d == 0:
        raise DependentRows("rows are linearly dependent")
    return math.sqrt(d), d


def polar_bound_report(ub: UniBasis) -> dict:
    """Compare the polar row norms of a completed basis with the norm bound (reported, not enforced)."""
    n = ub.n
    a = ub.basis[0]
    norm_sq = max(ub.polar_norms_sq())
    if n < 2:
        return {"n": n, "max_polar_norm": math.sqrt(norm_sq), "bound": None, "holds": None}
    bound = lemma_polar_bound(n, n - 1, math.sqrt(_sq(a)))
    return {
        "n": n,
        "max_polar_norm_sq": norm_sq,
        "max_polar_norm": math.sqrt(norm_sq),
        "bound": bound,
        "holds": math.sqrt(norm_sq) < bound,
    }
