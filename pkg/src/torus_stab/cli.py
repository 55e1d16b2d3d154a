"""Command line front end: `torus-stab <command> [options]`.

Exit codes: 0 success, 1 other library error, 2 parse or usage error,
3 unsupported arity, 4 conductor or size cap exceeded, 5 verification mismatch.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import bounds as compute_bounds, replay
from . import example, oracle
from .coset import TorsionCoset, TorsionPoint, orbit
from .cyclo import get_max_conductor, set_max_conductor
from .errors import TorusStabError, UnsupportedArity, VerificationMismatch
from .factor import cyclotomic_roots
from .laurent import format_poly, newton_polygon
from .parse import infer_nvars, parse_poly
from .serialize import SCHEMA, envelope, point_json
from .stab import stable_curve, stable_set, torsion_cosets_curve

COMMANDS = ("cosets", "stable", "orbit", "bounds", "oracle", "verify-example")


@dataclass
class Request:
    command: str
    poly_sources: list = field(default_factory=list)
    z: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    max_order: int = 60
    output: str = "json"
    point: Optional[str] = None
    coset: Optional[str] = None
    chain: bool = False
    threads: int = 1
    max_digits: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        need = {
            "cosets": ("poly_sources",),
            "stable": ("poly_sources", "z"),
            "orbit": ("z",),
            "bounds": ("z", "n", "d"),
            "oracle": ("poly_sources",),
        }.get(self.command, ())
        for name in need:
            if not getattr(self, name):
                raise ValueError(f"{self.command} requires --{name.replace('_sources', '')}")
        if self.command == "orbit" and (self.point is None) == (self.coset is None):
            raise ValueError("orbit requires exactly one of --point or --coset")


def _read_sources(sources, stdin=None) -> list:
    texts = []
    for src in sources:
        if src == "-":
            body = (stdin or sys.stdin).read()
        elif os.path.isfile(src):
            with open(src) as fh:
                body = fh.read()
        else:
            texts.append(src)
            continue
        for line in body.replace(";", "\n").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                texts.append(line)
    return texts


def _polys(req: Request, stdin=None) -> list:
    texts = _read_sources(req.poly_sources, stdin)
    if not texts:
        raise ValueError("no polynomials given")
    n = req.n or max(infer_nvars(t) for t in texts)
    return [parse_poly(t, n) for t in texts]


def _parse_point(spec: str) -> TorsionPoint:
    try:
        return TorsionPoint.of(*(Fraction(s.strip()) % 1 for s in spec.split(",")))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad point {spec!r}: expected exponents like 1/7,2/7") from exc


def _cosets(req, stdin):
    polys = _polys(req, stdin)
    if len(polys) != 1:
        raise ValueError("cosets takes exactly one polynomial")
    f = polys[0]
    body = {"poly": format_poly(f), "nvars": f.nvars}
    if f.nvars == 1:
        roots = cyclotomic_roots(f)
        cosets = [TorsionCoset.from_point(TorsionPoint((w,))) for w, _ in roots]
        body["multiplicities"] = [m for _, m in roots]
    elif f.nvars == 2:
        cosets = torsion_cosets_curve(f)
        npoly = newton_polygon(f)
        body["newton_area"] = str(npoly.area)
        pts = sum(1 for c in cosets if c.dim == 0)
        if npoly.area and not any(c.dim for c in cosets):
            body["ratio"] = str(Fraction(pts) / npoly.area)
    else:
        raise UnsupportedArity("the torsion coset census is available for one or two variables")
    body["cosets"] = [c.to_json() for c in cosets]
    body["points"] = sum(1 for c in cosets if c.dim == 0)
    body["positive_dimensional"] = sum(1 for c in cosets if c.dim > 0)
    text = [f"{format_poly(f)}: {body['points']} torsion points, {body['positive_dimensional']} positive-dimensional cosets"]
    text += ["  " + str(c) for c in cosets]
    return 0, body, text


def _stable(req, stdin):
    polys = _polys(req, stdin)
    res = stable_set(polys, req.z)
    body = res.to_json()
    text = [f"z = {req.z}: {len(res.cosets)} stable cosets" + ("" if res.complete else " (not certified complete)")]
    text += [f"  {c}  preperiod {cert.preperiod} period {cert.period}" for c, cert in zip(res.cosets, res.certs)]
    return 0, body, text


def _orbit(req, stdin):
    if req.point is not None:
        item = _parse_point(req.point)
    else:
        src = req.coset
        if src == "-":
            src = (stdin or sys.stdin).read()
        item = TorsionCoset.from_json(json.loads(src))
    cert = orbit(item, req.z)
    body = cert.to_json()
    text = [f"preperiod {cert.preperiod}, period {cert.period}"] + ["  " + str(o) for o in cert.orbit]
    return 0, body, text


def _bounds_cmd(req, stdin):
    kw = {} if req.max_digits is None else {"max_digits": req.max_digits}
    rep = compute_bounds(req.z, req.n, req.d, **kw)
    body = rep.to_json()
    body["replay"] = replay(rep, **kw)
    text = [f"T = {rep.T}", f"E = {rep.E}", f"L = {rep.L}", f"c0 = {rep.c0}", f"c1 = {rep.c1}", f"c2 = {rep.c2}"]
    if rep.proof_inequality is not None:
        text.append(f"recurrence inequality holds: {rep.proof_inequality}")
    return 0, body, text


def _oracle(req, stdin):
    polys = _polys(req, stdin)
    pts = oracle.enumerate_torsion_on(polys, req.max_order, threads=req.threads)
    body = {"max_order": req.max_order, "backend": oracle.backend_name(), "points": [point_json(p) for p in pts]}
    text = [f"{len(pts)} torsion points of order <= {req.max_order}"]
    if req.z:
        on = set(pts)
        stable = [p for p in pts if all(q in on for q in oracle._orbit_points(p, req.z))]
        body["z"] = req.z
        body["stable"] = [point_json(p) for p in stable]
        text.append(f"{len(stable)} stable under z = {req.z}")
        if req.chain:
            u, sets = oracle.chain_stabilization(polys, req.z, req.max_order, threads=req.threads)
            body["chain"] = {"u_star": u, "sizes": [len(s) for s in sets]}
            text.append(f"chain stabilizes at u* = {u}, sizes {[len(s) for s in sets]}")
    text += ["  " + str(p) for p in pts]
    return 0, body, text


def verify_example(max_order: int = 30, threads: int = 1) -> list:
    """Run the full reference pipeline; one dict per check with name, passed, detail and seconds."""
    f = parse_poly(example.CURVE, 2)
    checks = []

    def check(name, ok, detail, t0):
        checks.append({"name": name, "passed": bool(ok), "detail": detail, "seconds": round(time.perf_counter() - t0, 3)})

    t0 = time.perf_counter()
    census = torsion_cosets_curve(f)
    pts = sorted(c.point() for c in census if c.dim == 0)
    check("census", pts == example.expected_points() and all(c.dim == 0 for c in census),
          f"{len(pts)} points, {sum(1 for c in census if c.dim)} positive-dimensional", t0)
    t0 = time.perf_counter()
    area = newton_polygon(f).area
    check("ratio", area == example.NEWTON_AREA and Fraction(len(pts)) / area == example.TORSION_RATIO,
          f"area {area}, ratio {Fraction(len(pts)) / area if area else None}", t0)
    t0 = time.perf_counter()
    res = stable_curve([f], 2)
    stable = sorted(res.points())
    check("stable", stable == example.expected_stable() and not res.positive_dimensional(),
          f"{len(stable)} stable points for z = 2", t0)
    t0 = time.perf_counter()
    brute = oracle.enumerate_torsion_on([f], max_order, threads=threads)
    check("oracle census", sorted(brute) == [p for p in pts if p.order <= max_order],
          f"{len(brute)} points of order <= {max_order}", t0)
    t0 = time.perf_counter()
    u, sets = oracle.chain_stabilization([f], 2, max_order, threads=threads)
    check("chain", sorted(sets[-1]) == [p for p in stable if p.order <= max_order],
          f"u* = {u}, sizes {[len(s) for s in sets]}", t0)
    return checks


def _verify(req, stdin):
    checks = verify_example(min(req.max_order, 30), req.threads)
    ok = all(c["passed"] for c in checks)
    body = {"passed": ok, "checks": checks}
    text = [f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}: {c['detail']}" for c in checks]
    return (0 if ok else VerificationMismatch.exit_code), body, text


_HANDLERS = {
    "cosets": _cosets,
    "stable": _stable,
    "orbit": _orbit,
    "bounds": _bounds_cmd,
    "oracle": _oracle,
    "verify-example": _verify,
}


def run(req: Request, stdin=None) -> tuple:
    """(exit status, JSON-ready dict, text lines)."""
    try:
        code, body, text = _HANDLERS[req.command](req, stdin)
        return code, envelope(req.command, body), text
    except TorusStabError as exc:
        return exc.exit_code, _error(req.command, exc, exc.exit_code), [f"error: {exc}"]
    except (ValueError, json.JSONDecodeError) as exc:
        return 2, _error(req.command, exc, 2), [f"error: {exc}"]


def _error(command, exc, code) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    pos = getattr(exc, "position", None)
    if pos is not None:
        err["position"] = pos
    return {"schema": SCHEMA, "command": command, "error": err}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torus-stab", description="Torsion cosets and power-map stable sets in the algebraic torus.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poly=True):
        if poly:
            p.add_argument("--poly", action="append", default=[], help="expression, file path, or - for stdin (repeatable)")
            p.add_argument("--nvars", type=int, help="number of variables (inferred from names by default)")
        p.add_argument("--output", choices=("json", "text"), default="json")
        p.add_argument("--indent", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--max-conductor", type=int, default=None)
        return p

    common(sub.add_parser("cosets", help="all torsion cosets on a hypersurface (n <= 2)"))
    p = common(sub.add_parser("stable", help="maximal stable subvariety"))
    p.add_argument("--z", type=int, required=True)
    p = common(sub.add_parser("orbit", help="orbit of a torsion point or coset"), poly=False)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--point", help="comma-separated exponents, e.g. 1/7,2/7")
    p.add_argument("--coset", help="coset JSON, or - for stdin")
    p = common(sub.add_parser("bounds", help="stabilization constants"), poly=False)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-digits", type=int, default=None)
    p = common(sub.add_parser("oracle", help="brute-force torsion points of bounded order"))
    p.add_argument("--max-order", type=int, default=60)
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--chain", action="store_true", help="also run the point-level chain (needs --z)")
    p = common(sub.add_parser("verify-example", help="reproduce the 48-point reference curve"), poly=False)
    p.add_argument("--max-order", type=int, default=30)
    return ap


def main(argv=None, stdin=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    saved = get_max_conductor()
    try:
        if args.max_conductor is not None:
            set_max_conductor(args.max_conductor)
        return _main(args, stdin, stdout)
    except ValueError as exc:
        print(json.dumps(_error(args.command, exc, 2)), file=stdout)
        return 2
    finally:
        set_max_conductor(saved)


def _main(args, stdin, stdout) -> int:
    try:
        req = Request(
            command=args.command,
            poly_sources=getattr(args, "poly", []),
            z=getattr(args, "z", None),
            n=getattr(args, "n", None) or getattr(args, "nvars", None),
            d=getattr(args, "d", None),
            max_order=getattr(args, "max_order", 60),
            output=args.output,
            point=getattr(args, "point", None),
            coset=getattr(args, "coset", None),
            chain=getattr(args, "chain", False),
            threads=args.threads,
            max_digits=getattr(args, "max_digits", None),
        )
    except ValueError as exc:
        code, body, text = 2, _error(args.command, exc, 2), [f"error: {exc}"]
    else:
        code, body, text = run(req, stdin)
    if args.output == "json":
        print(json.dumps(body, indent=args.indent), file=stdout)
    else:
        print("\n".join(text), file=stdout if code == 0 else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
