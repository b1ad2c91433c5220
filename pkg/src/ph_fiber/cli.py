"""``ph-fiber`` command line: JSON in, JSON out.

Exit codes: 0 on success, 2 on malformed input, 3 on domain errors.  Errors
are written to stderr as ``{"error": ..., "message": ...}``.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from typing import List, Optional, Sequence

from . import fiber_circle, fiber_interval, generate
from .errors import DomainMismatch, NotSameComponent, PHFiberError, VerificationFailed
from .numeric import DEFAULT_EPSILON, as_number, loads, to_jsonable, tolerance
from .persistence import Barcode, barcode, barcode_bruteforce, bottleneck_distance, minimal_resolution
from .pl_core import DomainKind, PLFunction, extrema, max_residual
from .surface_report import SurfaceSpec, circle_interval_report, fiber_homotopy_type

EXIT_OK, EXIT_MALFORMED, EXIT_DOMAIN = 0, 2, 3
RESIDUAL_TOLERANCE = 1e-9


class MalformedInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(message)


_EXACT = True  # set per invocation by --inexact


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return loads(text) if _EXACT else json.loads(text)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_function(path: str) -> PLFunction:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise MalformedInput(f"{path}: expected a JSON object")
    try:
        return PLFunction.from_json(data)
    except ValueError as exc:
        raise MalformedInput(f"{path}: {exc}") from None


def _load_barcode(path: str) -> Barcode:
    """A barcode file, or a function file whose barcode is taken."""
    data = _read_json(path)
    if isinstance(data, list):
        data = {"bars": data}
    if not isinstance(data, dict):
        raise MalformedInput(f"{path}: expected a JSON object")
    if isinstance(data.get("barcode"), dict):
        # output of the barcode command
        data = data["barcode"]
    try:
        if "domain" in data and "breakpoints" in data:
            return barcode(PLFunction.from_json(data))
        return Barcode.from_json(data)
    except ValueError as exc:
        raise MalformedInput(f"{path}: {exc}") from None


def _parse_boundary(text: Optional[str]):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise MalformedInput(f"--boundary expects 'b0,b1', got {text!r}")
    try:
        return as_number(parts[0].strip()), as_number(parts[1].strip())
    except ValueError as exc:
        raise MalformedInput(f"--boundary: {exc}") from None


def _require_domain(f: PLFunction, domain: Optional[str]) -> DomainKind:
    if domain is None:
        return f.domain
    kind = DomainKind.parse(domain)
    if f.domain is not kind:
        raise DomainMismatch(f"--domain {kind.value} but the function lives on the {f.domain.value}")
    return kind


def _max_bottleneck(d: Barcode, path: Sequence[PLFunction]):
    worst = max(bottleneck_distance(d, barcode(g)) for g in path)
    if worst != 0:
        raise VerificationFailed(f"path leaves the fiber: bottleneck distance {worst}")
    return worst


def cmd_barcode(args) -> dict:
    f = _load_function(args.function)
    d = barcode(f)
    out = {"barcode": d.to_json()}
    if args.verify:
        res = minimal_resolution(f, args.resolution)
        oracle = barcode_bruteforce(f, res)
        if oracle != d:
            raise VerificationFailed(f"brute-force barcode {oracle!r} differs from {d!r}")
        out["verified"] = {"resolution": res, "oracle": "union-find"}
    if args.emit_plot:
        with open(args.emit_plot, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "f"])
            for t, v in f.sample(args.samples):
                writer.writerow([repr(float(t)), repr(float(v))])
    return out


def cmd_bottleneck(args) -> dict:
    return {"distance": to_jsonable(bottleneck_distance(_load_barcode(args.first), _load_barcode(args.second)))}


def cmd_same_component(args) -> dict:
    f, g = _load_function(args.f), _load_function(args.g)
    kind = _require_domain(f, args.domain)
    _require_domain(g, kind.value)
    if kind is DomainKind.CIRCLE:
        if args.boundary is not None:
            raise MalformedInput("--boundary only applies to the interval")
        sc = fiber_circle.same_component(f, g)
        return {"same": sc.same, "shifts": list(sc.shifts), "reason": sc.reason}
    same = fiber_interval.same_component_interval(f, g, _parse_boundary(args.boundary))
    return {"same": same}


def cmd_canonical(args) -> dict:
    f = _load_function(args.function)
    if f.is_circle:
        comp = fiber_circle.component_of(f)
        nf = comp.cyclic_class.normal_form
        return {"barcode": comp.barcode.to_json(), "canonical": comp.canonical.to_json(),
                "class": nf.to_json() if nf is not None else None,
                "symmetry_order": comp.cyclic_class.symmetry_order()}
    comp = fiber_interval.component_of_interval(f, _parse_boundary(args.boundary))
    return {"barcode": comp.barcode.to_json(), "canonical": comp.canonical.to_json(),
            "sequence": comp.sequence.to_json()}


def cmd_reparam(args) -> dict:
    f = _load_function(args.function)
    if f.is_circle:
        comp = fiber_circle.component_of(f)
        shifts = fiber_circle.valid_shifts(f, comp)
        shift = shifts[0] if args.shift is None else args.shift
        phi = fiber_circle.reparametrization(f, comp, shift)
        target = comp.canonical
        out = {"shift": shift, "valid_shifts": shifts}
    else:
        seq, _ = extrema(f)
        target = fiber_interval.canonical_representative_interval(seq)
        phi = fiber_interval.reparametrization_interval(f, target)
        out = {}
    out.update({"phi": phi.to_json(), "canonical": target.to_json()})
    if args.verify:
        res = max_residual(f, target, phi, args.samples)
        if res > RESIDUAL_TOLERANCE:
            raise VerificationFailed(f"residual {res} exceeds {RESIDUAL_TOLERANCE}")
        out["max_residual"] = res
    return out


def cmd_path(args) -> dict:
    f, g = _load_function(args.f), _load_function(args.g)
    _require_domain(g, f.domain.value)
    if f.is_circle:
        path = fiber_circle.fiber_path(f, g, args.steps)
    else:
        if args.steps < 2:
            raise MalformedInput("interval paths go through the canonical function and need --steps >= 2")
        if not fiber_interval.same_component_interval(f, g):
            raise NotSameComponent("functions lie in different components")
        half = args.steps // 2
        there = fiber_interval.contraction_path(f, half)
        back = fiber_interval.contraction_path(g, args.steps - half)
        path = there + back[::-1][1:]
    out = {"path": [h.to_json() for h in path], "steps": args.steps}
    if args.verify:
        out["max_bottleneck"] = to_jsonable(_max_bottleneck(barcode(f), path))
    return out


def cmd_contract(args) -> dict:
    f = _load_function(args.function)
    _require_domain(f, "interval")
    path = fiber_interval.contraction_path(f, args.steps, _parse_boundary(args.boundary))
    out = {"path": [h.to_json() for h in path], "steps": args.steps}
    if args.verify:
        out["max_bottleneck"] = to_jsonable(_max_bottleneck(barcode(f), path))
    return out


def cmd_count_components(args) -> dict:
    d = _load_barcode(args.barcode)
    kind = DomainKind.parse(args.domain)
    if kind is DomainKind.CIRCLE:
        comps = fiber_circle.enumerate_components(d, allow_repeated=args.allow_repeated)
        items = [{"class": c.cyclic_class.normal_form.to_json() if not c.is_constant else None,
                  "canonical": c.canonical.to_json()} for c in comps]
    else:
        comps = fiber_interval.enumerate_components_interval(d, _parse_boundary(args.boundary),
                                                             allow_repeated=args.allow_repeated)
        items = [{"sequence": c.sequence.to_json(), "canonical": c.canonical.to_json()} for c in comps]
    return {"count": len(items), "components": items}


def _surface(args) -> SurfaceSpec:
    tags = args.boundary_tags.split(",") if args.boundary_tags else None
    try:
        if os.path.exists(args.surface):
            spec = _read_json(args.surface)
            if not isinstance(spec, dict):
                raise MalformedInput(f"{args.surface}: expected a JSON object")
            surface = SurfaceSpec.from_json(spec)
            if args.beta2 is not None:
                surface = SurfaceSpec(surface.orientable, surface.genus, surface.boundary, args.beta2)
            return surface
        return SurfaceSpec.named(args.surface, tags, args.beta2)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


def cmd_surface_report(args) -> dict:
    d = _load_barcode(args.barcode)
    if args.surface in ("circle", "interval"):
        return circle_interval_report(args.surface, d, _parse_boundary(args.boundary)).to_json()
    return fiber_homotopy_type(d, _surface(args), args.max_n).to_json()


def cmd_gen(args) -> dict:
    rng = random.Random(args.seed)
    if args.kind == "function":
        f = generate.random_function(rng, args.domain, args.n, distinct=not args.allow_repeated)
        return f.to_json()
    if args.kind == "reparam":
        return generate.random_reparametrization(rng, args.domain, args.pieces).to_json()
    f = generate.random_function(rng, args.domain, args.n, distinct=not args.allow_repeated)
    return barcode(f).to_json()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ph-fiber", description="Fibers of the persistence map for PL functions on the circle and interval.")
    p.add_argument("--epsilon", type=float, default=None,
                   help=f"tolerance for float inputs (default $PH_FIBER_EPSILON or {DEFAULT_EPSILON})")
    p.add_argument("--inexact", action="store_true",
                   help="read JSON decimals as binary floats compared with --epsilon (default: exact rationals)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("barcode", help="persistence barcode of a function")
    s.add_argument("function")
    s.add_argument("--verify", action="store_true", help="check against the union-find oracle")
    s.add_argument("--resolution", type=int, default=None, help="oracle grid size (default: smallest valid)")
    s.add_argument("--emit-plot", metavar="CSV", help="write sampled (t, f(t)) pairs")
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(run=cmd_barcode)

    s = sub.add_parser("bottleneck", help="bottleneck distance of two barcodes (or functions)")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(run=cmd_bottleneck)

    s = sub.add_parser("same-component", help="do two functions lie in one fiber component")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--domain", choices=["circle", "interval"])
    s.add_argument("--boundary", help="prescribed 'f(0),f(1)' on the interval")
    s.set_defaults(run=cmd_same_component)

    s = sub.add_parser("canonical", help="component and canonical representative of a function")
    s.add_argument("function")
    s.add_argument("--boundary")
    s.set_defaults(run=cmd_canonical)

    s = sub.add_parser("reparam", help="reparametrization onto the canonical representative")
    s.add_argument("function")
    s.add_argument("--shift", type=int, default=None)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(run=cmd_reparam)

    s = sub.add_parser("path", help="path inside the fiber between two functions")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--steps", type=int, default=16)
    s.add_argument("--verify", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_path)

    s = sub.add_parser("contract", help="path from an interval function to its canonical representative")
    s.add_argument("function")
    s.add_argument("--steps", type=int, default=16)
    s.add_argument("--boundary")
    s.add_argument("--verify", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_contract)

    s = sub.add_parser("count-components", help="enumerate fiber components over a barcode")
    s.add_argument("barcode")
    s.add_argument("--domain", choices=["circle", "interval"], required=True)
    s.add_argument("--boundary")
    s.add_argument("--allow-repeated", action="store_true")
    s.set_defaults(run=cmd_count_components)

    s = sub.add_parser("surface-report", help="saddle count and homotopy type of a fiber component")
    s.add_argument("--surface", required=True, help="shortcut name, 'circle', 'interval', or a surface JSON file")
    s.add_argument("--barcode", required=True)
    s.add_argument("--boundary-tags", help="comma-separated min/max per boundary circle")
    s.add_argument("--beta2", type=int, default=None)
    s.add_argument("--boundary", help="prescribed 'f(0),f(1)' for interval reports")
    s.add_argument("--max-n", type=int, default=4)
    s.set_defaults(run=cmd_surface_report)

    s = sub.add_parser("gen", help="seeded random test data")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--domain", choices=["circle", "interval"], default="circle")
    s.add_argument("--kind", choices=["function", "reparam", "barcode"], default="function")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--pieces", type=int, default=4)
    s.add_argument("--allow-repeated", action="store_true")
    s.set_defaults(run=cmd_gen)
    return p


def _emit(obj, stream) -> None:
    stream.write(json.dumps(obj, sort_keys=True) + "\n")


def _epsilon(args) -> float:
    if args.epsilon is not None:
        return args.epsilon
    env = os.environ.get("PH_FIBER_EPSILON")
    if env:
        try:
            return float(env)
        except ValueError:
            raise MalformedInput(f"PH_FIBER_EPSILON={env!r} is not a number") from None
    return DEFAULT_EPSILON


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        global _EXACT
        _EXACT = not args.inexact
        if getattr(args, "steps", 1) < 1:
            raise MalformedInput("--steps must be >= 1")
        with tolerance(_epsilon(args)):
            out = args.run(args)
    except MalformedInput as exc:
        _emit({"error": "MalformedInput", "message": str(exc)}, sys.stderr)
        return EXIT_MALFORMED
    except PHFiberError as exc:
        _emit(exc.to_json(), sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        _emit({"error": "MalformedInput", "message": str(exc)}, sys.stderr)
        return EXIT_MALFORMED
    target = getattr(args, "output", None)
    if target:
        with open(target, "w", encoding="utf-8") as fh:
            _emit(out, fh)
    else:
        _emit(out, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
