"""JSON encoding of library values. Integers that may grow without bound are emitted as decimal strings."""
import json
from fractions import Fraction

from .coset import OrbitCert, TorsionCoset, TorsionPoint
from .cyclo import CycNum, RootOfUnity
from .laurent import LaurentPoly, format_poly

SCHEMA = "1"


def point_json(p: TorsionPoint) -> list:
    return [str(q) for q in p.exponents]


def cycnum_json(c: CycNum) -> dict:
    return {"conductor": c.conductor, "num": [str(a) for a in c.num], "den": str(c.den)}


def poly_json(f: LaurentPoly) -> dict:
    return {
        "nvars": f.nvars,
        "text": format_poly(f),
        "terms": [[list(map(str, e)), cycnum_json(c)] for e, c in sorted(f.terms.items())],
    }


def to_jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, TorsionPoint):
        return point_json(obj)
    if isinstance(obj, LaurentPoly):
        return poly_json(obj)
    if isinstance(obj, CycNum):
        return cycnum_json(obj)
    if isinstance(obj, RootOfUnity):
        return str(obj.exponent)
    if isinstance(obj, (Fraction, int)) and not isinstance(obj, bool):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    return obj


def envelope(command: str, body: dict) -> dict:
    out = {"schema": SCHEMA, "command": command}
    out.update(body)
    return out


def dumps(obj, indent=None) -> str:
    return json.dumps(obj, indent=indent, sort_keys=False)


def coset_from_json(obj: dict) -> TorsionCoset:
    return TorsionCoset.from_json(obj)


def orbit_from_json(obj: dict) -> OrbitCert:
    items = []
    for o in obj["orbit"]:
        items.append(TorsionCoset.from_json(o) if isinstance(o, dict) else TorsionPoint.of(*o))
    return OrbitCert(obj["preperiod"], obj["period"], tuple(items))
