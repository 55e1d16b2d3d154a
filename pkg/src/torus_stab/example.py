"""Reference curve with 48 torsion points and its stable set under squaring."""
from fractions import Fraction

from .coset import TorsionPoint

CURVE = "x^2*y^2 + x^2*y + x*y^2 + x*y + x + y + 1"
NEWTON_AREA = Fraction(3)
TORSION_RATIO = 16


def _pt(a, b):
    return TorsionPoint.of(Fraction(a) % 1, Fraction(b) % 1)


def expected_points() -> list:
    """The 48 torsion points, written as exponent pairs."""
    half = Fraction(1, 2)
    out = []
    for i in (1, 5, 7, 11):
        w = Fraction(i, 12)
        out += [_pt(4 * w, w), _pt(w, 4 * w), _pt(half + w, w)]
    out += expected_stable()
    for i in (1, 7, 11, 13, 17, 19, 23, 29):
        w = Fraction(i, 30)
        out += [_pt(half + 3 * w, w), _pt(w, half + 3 * w), _pt(w, 11 * w)]
    return sorted(set(out))


def expected_stable() -> list:
    """The 12 points of order 7 whose squaring orbit stays on the curve."""
    out = []
    for i in range(1, 7):
        w = Fraction(i, 7)
        out += [_pt(w, 2 * w), _pt(2 * w, w)]
    return sorted(set(out))
