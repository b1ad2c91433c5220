"""Path components of the persistence fiber for functions on [0, 1].

With prescribed boundary values a component is labelled by the full ordered
extrema sequence.  Without a prescription, an endpoint that is a local
maximum leaves no trace in the barcode and its value can slide freely, so the
label is the *reduced* sequence with such boundary maxima removed; it always
starts and ends with a minimum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import BoundaryViolation, ClassMismatch, ConstantFunction, DomainMismatch, MalformedBarcode, RepeatedEndpoints, TooLarge
from .numeric import Number, as_number, close, compare
from .persistence import Barcode, barcode, has_distinct_endpoints, same_barcode
from .pl_core import (DomainKind, ExtremaSequence, PLFunction, Reparametrization, _extremal_runs, compose,
                      evaluate, extrema, identity, interpolate_lifts)

MAX_BOUNDED_BARS = 10

Boundary = Optional[Tuple[Number, Number]]


@dataclass(frozen=True)
class FiberComponentInterval:
    barcode: Barcode
    sequence: ExtremaSequence
    canonical: PLFunction
    boundary: Boundary = None


def _require_interval(*fs: PLFunction) -> None:
    for f in fs:
        if f.domain is not DomainKind.INTERVAL:
            raise DomainMismatch("expected an interval function")


def parse_boundary(boundary) -> Boundary:
    if boundary is None:
        return None
    b0, b1 = boundary
    return as_number(b0), as_number(b1)


def check_boundary(f: PLFunction, boundary: Boundary) -> None:
    if boundary is None:
        return
    b0, b1 = parse_boundary(boundary)
    if not (close(f.values[0], b0) and close(f.values[-1], b1)):
        raise BoundaryViolation(f"f(0), f(1) = {f.values[0]}, {f.values[-1]} but prescribed {b0}, {b1}")


def _reduce(seq: ExtremaSequence) -> ExtremaSequence:
    vals = list(seq.values)
    starts_min = seq.starts_with_min
    if not starts_min:
        vals = vals[1:]
    if len(vals) % 2 == 0:
        vals = vals[:-1]
    return ExtremaSequence(DomainKind.INTERVAL, tuple(vals), True)


def component_sequence(f: PLFunction, boundary: Boundary = None) -> ExtremaSequence:
    """The ordered extrema sequence labelling the component of a non-constant ``f``."""
    _require_interval(f)
    check_boundary(f, boundary)
    seq, _ = extrema(f)
    return seq if boundary is not None else _reduce(seq)


def same_component_interval(f: PLFunction, g: PLFunction, boundary: Boundary = None) -> bool:
    """True when ``f`` and ``g`` lie in one component of the interval fiber."""
    _require_interval(f, g)
    check_boundary(f, boundary)
    check_boundary(g, boundary)
    if not same_barcode(barcode(f), barcode(g)):
        return False
    try:
        sf = component_sequence(f, boundary)
    except ConstantFunction:
        try:
            component_sequence(g, boundary)
        except ConstantFunction:
            return close(f.values[0], g.values[0])
        return _constant_like(g, boundary)
    try:
        sg = component_sequence(g, boundary)
    except ConstantFunction:
        return _constant_like(f, boundary)
    return len(sf.values) == len(sg.values) and sf.starts_with_min == sg.starts_with_min and all(
        close(a, b) for a, b in zip(sf.values, sg.values))


def _constant_like(f: PLFunction, boundary: Boundary) -> bool:
    # a non-constant f whose reduced sequence is a single minimum deforms onto that constant
    if boundary is not None:
        return False
    return len(component_sequence(f).values) == 1


def canonical_representative_interval(sequence: ExtremaSequence) -> PLFunction:
    """Extrema at equally spaced parameters, affine in between."""
    vals = sequence.values
    if len(vals) == 1:
        return PLFunction.constant(DomainKind.INTERVAL, vals[0])
    k = len(vals) - 1
    return PLFunction(DomainKind.INTERVAL, tuple(Fraction(j, k) for j in range(k + 1)), vals)


def component_of_interval(f: PLFunction, boundary: Boundary = None) -> FiberComponentInterval:
    _require_interval(f)
    boundary = parse_boundary(boundary)
    try:
        seq = component_sequence(f, boundary)
    except ConstantFunction:
        seq = ExtremaSequence(DomainKind.INTERVAL, (f.values[0],))
    return FiberComponentInterval(barcode(f), seq, canonical_representative_interval(seq), boundary)


def reparametrization_interval(f: PLFunction, canonical: PLFunction) -> Reparametrization:
    """Monotone ``phi`` fixing 0 and 1 with ``canonical o phi == f``.

    Both functions must share the same full extrema sequence.
    """
    _require_interval(f, canonical)
    runs = _extremal_runs(f)
    ref = extrema(canonical)[0].values
    if len(runs) != len(ref) or not all(close(r.value, v) for r, v in zip(runs, ref)):
        raise ClassMismatch("f and the canonical representative have different extrema sequences")
    ts, vs = f.breakpoints, f.values
    last = len(ref) - 1
    pos: List[Number] = [None] * len(ts)
    for r, run in enumerate(runs):
        here = Fraction(r, last)
        for j in range(run.first, run.first + run.length):
            pos[j] = here
        if r == last:
            break
        lo_val, hi_val = ref[r], ref[r + 1]
        for j in range(run.first + run.length, runs[r + 1].first):
            frac_ = (vs[j] - lo_val) / (hi_val - lo_val)
            pos[j] = here + min(max(frac_, 0), 1) / last
    return Reparametrization.from_lift(DomainKind.INTERVAL, list(zip(ts, pos)))


def _clip_boundary_maxima(f: PLFunction, s) -> PLFunction:
    """Lower unrecorded boundary maxima toward their neighbouring minimum; ``s = 1`` flattens them."""
    runs = _extremal_runs(f)
    s = as_number(s)
    ts, vs = list(f.breakpoints), list(f.values)
    pieces = []  # (lo, hi, level) ranges to clip
    if not runs[0].is_min:
        nxt = runs[1]
        pieces.append((0, nxt.first, (1 - s) * runs[0].value + s * nxt.value))
    if not runs[-1].is_min:
        prv = runs[-2]
        pieces.append((prv.first + prv.length - 1, len(ts) - 1, (1 - s) * runs[-1].value + s * prv.value))
    pts = list(zip(ts, vs))
    extra = []
    for lo, hi, level in pieces:
        for j in range(lo, hi):
            (t0, v0), (t1, v1) = pts[j], pts[j + 1]
            if (v0 - level) * (v1 - level) < 0:
                extra.append((t0 + (level - v0) * (t1 - t0) / (v1 - v0), level))
    for lo, hi, level in pieces:
        for j in range(lo, hi + 1):
            if vs[j] > level:
                pts[j] = (ts[j], level)
    merged = sorted(pts + extra)
    out = []
    for t, v in merged:
        if out and out[-1][0] == t:
            continue
        out.append((t, v))
    return PLFunction(DomainKind.INTERVAL, tuple(p[0] for p in out), tuple(p[1] for p in out))


def contraction_path(f: PLFunction, steps: int, boundary: Boundary = None) -> List[PLFunction]:
    """Path from ``f`` to the canonical representative of its component.

    The main leg is ``canonical o ((1 - t) phi + t id)``.  Without a boundary
    prescription, boundary maxima are first lowered onto the adjacent minimum
    (the barcode does not see them), using the first half of the steps.
    """
    _require_interval(f)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    boundary = parse_boundary(boundary)
    check_boundary(f, boundary)
    comp = component_of_interval(f, boundary)
    try:
        seq, _ = extrema(f)
    except ConstantFunction:
        return [f] * (steps + 1)
    path: List[PLFunction] = []
    start = f
    reparam_steps = steps
    if boundary is None and seq.values != comp.sequence.values:
        if steps == 1:
            return [f, comp.canonical]
        clip_steps = steps // 2
        reparam_steps = steps - clip_steps
        path.extend(_clip_boundary_maxima(f, Fraction(i, clip_steps)) for i in range(clip_steps))
        start = _clip_boundary_maxima(f, 1)
        if len(comp.sequence.values) == 1:
            # only one minimum is left, so start is already constant
            path.extend([start] * reparam_steps + [comp.canonical])
            path[0] = f
            return path
    phi = reparametrization_interval(start, comp.canonical)
    ident = identity(DomainKind.INTERVAL)
    for i in range(reparam_steps + 1):
        t = Fraction(i, reparam_steps)
        path.append(compose(comp.canonical, interpolate_lifts(phi, ident, t)))
    # same function pointwise; keep the caller's breakpoints
    path[0] = f
    return path


def _check_interval_barcode(d: Barcode) -> None:
    if len(d.infinite(0)) != 1 or d.degree(1) or d.degree(2):
        raise MalformedBarcode("interval barcodes have one infinite degree-0 bar and only bounded degree-0 bars")
    b0 = d.infinite(0)[0].birth
    for bar in d.bounded(0):
        if compare(bar.birth, b0) < 0:
            raise MalformedBarcode(f"bar ({bar.birth}, {bar.death}) is born below the global minimum {b0}")


def _interleavings(minima: Sequence[Number], maxima: Sequence[Number]):
    """Alternating sequences m M m ... m using every value once (min first and last)."""
    for mins in set(itertools.permutations(minima)):
        for maxs in set(itertools.permutations(maxima)):
            vals = [mins[0]]
            for a, b in zip(maxs, mins[1:]):
                vals.extend([a, b])
            yield tuple(vals)


def _alternates(vals: Sequence[Number], starts_min: bool) -> bool:
    for i in range(len(vals) - 1):
        want = -1 if (i % 2 == 0) == starts_min else 1
        if compare(vals[i], vals[i + 1]) != want:
            return False
    return True


def enumerate_components_interval(d: Barcode, boundary: Boundary = None, allow_repeated: bool = False,
                                  max_bounded: int = MAX_BOUNDED_BARS) -> List[FiberComponentInterval]:
    """All fiber components over an interval barcode, sorted by sequence.

    Minima are ``{b0} + births`` and interior maxima are the deaths.  With a
    prescription ``(beta0, beta1)`` each endpoint is tried both as a boundary
    minimum (consuming a birth) and as a boundary maximum (adding its value).
    """
    _check_interval_barcode(d)
    boundary = parse_boundary(boundary)
    bounded = d.bounded(0)
    if len(bounded) > max_bounded:
        raise TooLarge(f"{len(bounded)} bounded bars exceeds the enumeration limit {max_bounded}")
    if not allow_repeated and not has_distinct_endpoints(d):
        raise RepeatedEndpoints("bounded endpoints repeat; pass allow_repeated=True to enumerate anyway")
    minima = [d.infinite(0)[0].birth] + [b.birth for b in bounded]
    maxima = [b.death for b in bounded]

    candidates = set()
    if boundary is None:
        for vals in _interleavings(minima, maxima):
            if _alternates(vals, True):
                candidates.add((vals, True))
    else:
        b0, b1 = boundary
        sequences = list(_interleavings(minima, maxima))
        for left_max, right_max in itertools.product((False, True), repeat=2):
            for vals in sequences:
                # a boundary minimum is pinned to an end; a boundary maximum is appended
                if not left_max and not close(vals[0], b0):
                    continue
                if not right_max and not close(vals[-1], b1):
                    continue
                full = ((b0,) if left_max else ()) + vals + ((b1,) if right_max else ())
                if _alternates(full, not left_max):
                    candidates.add((full, not left_max))
    out = []
    for vals, starts_min in sorted(candidates):
        seq = ExtremaSequence(DomainKind.INTERVAL, vals, starts_min)
        canon = canonical_representative_interval(seq)
        if same_barcode(barcode(canon), d):
            out.append(FiberComponentInterval(d, seq, canon, boundary))
    return out
