"""Path components of the persistence fiber for functions on the circle.

Two non-constant circle functions with the same barcode lie in the same
component exactly when their extrema sequences agree up to a cyclic shift of
the (min, max) pairs.  Each component contains a canonical representative
whose extrema sit on the regular 2n-gon, and every member factors through it
by a monotone reparametrization.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .errors import (ClassMismatch, ConstantFunction, DomainMismatch, MalformedBarcode,
                     NotSameComponent, RepeatedEndpoints, TooLarge)
from .numeric import Number, as_number, close, compare
from .persistence import Bar, Barcode, barcode, has_distinct_endpoints, same_barcode
from .pl_core import (DomainKind, ExtremaSequence, PLFunction, Reparametrization, _extremal_runs,
                      _frac, compose, cyclic_shifts, extrema, interpolate_lifts, normalize_cyclic)

MAX_PAIRS = 10


@dataclass(frozen=True)
class CyclicClass:
    """Normal form of an extrema sequence under cyclic shifts; ``n == 0`` marks constants."""

    normal_form: Optional[ExtremaSequence]
    constant: Optional[Number] = None

    @classmethod
    def of(cls, seq: ExtremaSequence) -> "CyclicClass":
        return cls(normalize_cyclic(seq))

    @classmethod
    def from_values(cls, values: Sequence) -> "CyclicClass":
        return cls.of(ExtremaSequence(DomainKind.CIRCLE, tuple(values)))

    @property
    def n(self) -> int:
        return 0 if self.normal_form is None else self.normal_form.n

    def symmetry_order(self) -> int:
        """Number of cyclic shifts fixing the sequence."""
        if self.normal_form is None:
            return 1
        return len(cyclic_shifts(self.normal_form, self.normal_form))


@dataclass(frozen=True)
class FiberComponentCircle:
    barcode: Barcode
    cyclic_class: CyclicClass
    canonical: PLFunction

    @property
    def n(self) -> int:
        return self.cyclic_class.n

    @property
    def is_constant(self) -> bool:
        return self.cyclic_class.normal_form is None


class SameComponent(NamedTuple):
    same: bool
    shifts: Tuple[int, ...] = ()
    reason: Optional[str] = None


def _require_circle(*fs: PLFunction) -> None:
    for f in fs:
        if f.domain is not DomainKind.CIRCLE:
            raise DomainMismatch("expected a circle function")


def canonical_representative(cls: CyclicClass) -> PLFunction:
    """PL function with ``c_i`` at ``(2i-2)/2n``, ``d_i`` at ``(2i-1)/2n``, affine in between."""
    if cls.normal_form is None:
        return PLFunction.constant(DomainKind.CIRCLE, cls.constant)
    vals = cls.normal_form.values
    k = len(vals)
    return PLFunction(DomainKind.CIRCLE, tuple(Fraction(j, k) for j in range(k)), vals)


def component_of(f: PLFunction) -> FiberComponentCircle:
    """The fiber component containing ``f``."""
    _require_circle(f)
    d = barcode(f)
    try:
        seq, _ = extrema(f)
    except ConstantFunction:
        cls = CyclicClass(None, f.values[0])
        return FiberComponentCircle(d, cls, canonical_representative(cls))
    cls = CyclicClass.of(seq)
    return FiberComponentCircle(d, cls, canonical_representative(cls))


def same_component(f: PLFunction, g: PLFunction) -> SameComponent:
    """Decide whether ``f`` and ``g`` lie in one fiber component.

    ``shifts`` lists every ``k`` with ``Val(g)`` equal to ``Val(f)`` shifted by
    ``k`` pairs, in increasing order; several appear when the sequence is
    cyclically symmetric.
    """
    _require_circle(f, g)
    if not same_barcode(barcode(f), barcode(g)):
        return SameComponent(False, (), "BarcodeMismatch")
    try:
        vf, _ = extrema(f)
    except ConstantFunction:
        try:
            extrema(g)
        except ConstantFunction:
            same = close(f.values[0], g.values[0])
            return SameComponent(same, (0,) if same else (), None if same else "BarcodeMismatch")
        return SameComponent(False, (), "BarcodeMismatch")
    vg, _ = extrema(g)
    shifts = tuple(cyclic_shifts(vf, vg))
    return SameComponent(bool(shifts), shifts, None if shifts else "DifferentCyclicClass")


def valid_shifts(f: PLFunction, target: FiberComponentCircle) -> List[int]:
    """Shifts ``k`` with ``Val(f)`` equal to ``Val(canonical)`` shifted by ``k`` pairs."""
    vf, _ = extrema(f)
    return cyclic_shifts(target.cyclic_class.normal_form, vf)


def reparametrization(f: PLFunction, target: FiberComponentCircle, shift: int) -> Reparametrization:
    """The map ``phi`` with ``canonical o phi == f`` sending ``c_i(f)`` to ``c_{i+shift}``.

    On the arc from ``c_i(f)`` to ``d_i(f)`` it is the inverse of the canonical
    representative's affine piece composed with ``f``; plateaus of ``f``
    collapse to single points, so ``phi`` may be non-injective.
    """
    _require_circle(f)
    if target.is_constant:
        raise ConstantFunction("constant functions have no extrema to match")
    runs = _extremal_runs(f)
    ref = target.cyclic_class.normal_form.values
    n2 = len(ref)
    n = n2 // 2
    if len(runs) != n2:
        raise ClassMismatch(f"f has {len(runs) // 2} extrema pairs, target has {n}")
    shift %= n
    if not all(close(runs[r].value, ref[(r + 2 * shift) % n2]) for r in range(n2)):
        raise ClassMismatch(f"Val(f) is not the canonical sequence shifted by {shift}")

    ts = f.breakpoints
    vs = f.values
    k = len(ts)
    pos = [None] * k  # phi mod 1 at each breakpoint
    width = Fraction(1, n2)
    for r, run in enumerate(runs):
        slot = (r + 2 * shift) % n2
        here = Fraction(slot, n2)
        for j in range(run.length):
            pos[(run.first + j) % k] = here
        lo_val, hi_val = ref[slot], ref[(slot + 1) % n2]
        nxt = runs[(r + 1) % n2]
        idx = (run.first + run.length) % k
        while idx != nxt.first:
            # affine inverse of the canonical piece between this slot and the next
            frac_ = (vs[idx] - lo_val) / (hi_val - lo_val)
            frac_ = min(max(frac_, 0), 1)
            pos[idx] = here + width * frac_
            idx = (idx + 1) % k
    lift = [pos[0]]
    for j in range(1, k):
        lift.append(lift[-1] + _frac(pos[j] - pos[j - 1]))
    start = _frac(lift[0])
    offset = lift[0] - start
    return Reparametrization.from_lift(DomainKind.CIRCLE, [(t, x - offset) for t, x in zip(ts, lift)])


def _lift_offset(phi_f: Reparametrization, phi_g: Reparametrization) -> int:
    """Integer ``k`` minimising ``|Phi_f(0) - (Phi_g(0) + k)|``; ties go to the smaller ``k``."""
    delta = phi_f.lift(0) - phi_g.lift(0)
    lo = math.floor(delta)
    best = min((lo, lo + 1), key=lambda k: (abs(delta - k), k))
    return best


def fiber_path(f: PLFunction, g: PLFunction, steps: int) -> List[PLFunction]:
    """Functions ``f = f_0, ..., f_steps = g`` inside one fiber component.

    Both ends are written as ``canonical o phi``; the path interpolates the two
    lifts linearly, which stays monotone of degree one at every step.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    sc = same_component(f, g)
    if not sc.same:
        raise NotSameComponent(sc.reason or "functions lie in different components")
    comp = component_of(f)
    if comp.is_constant:
        return [f] * (steps + 1)
    phi_f = reparametrization(f, comp, valid_shifts(f, comp)[0])
    phi_g = reparametrization(g, comp, valid_shifts(g, comp)[0])
    offset = _lift_offset(phi_f, phi_g)
    out = []
    for i in range(steps + 1):
        t = Fraction(i, steps)
        out.append(compose(comp.canonical, interpolate_lifts(phi_f, phi_g, t, offset)))
    # same functions pointwise; keep the caller's breakpoints
    out[0], out[-1] = f, g
    return out


def _check_circle_barcode(d: Barcode) -> Tuple[Number, Number, List[Bar]]:
    inf0, inf1 = d.infinite(0), d.infinite(1)
    if len(inf0) != 1 or len(inf1) != 1:
        raise MalformedBarcode("circle barcodes have exactly one infinite bar in degrees 0 and 1")
    if d.bounded(1) or d.degree(2):
        raise MalformedBarcode("circle barcodes have no bounded degree-1 bars and nothing in degree 2")
    b0, b1 = inf0[0].birth, inf1[0].birth
    bounded = d.bounded(0)
    if compare(b0, b1) > 0 or (close(b0, b1) and bounded):
        raise MalformedBarcode("need b0 < b1 for a non-trivial circle barcode")
    for bar in bounded:
        if compare(bar.birth, b0) < 0 or compare(bar.death, b1) > 0:
            raise MalformedBarcode(f"bar ({bar.birth}, {bar.death}) leaves [b0, b1] = [{b0}, {b1}]")
    return b0, b1, bounded


def enumerate_components(d: Barcode, allow_repeated: bool = False,
                         max_pairs: int = MAX_PAIRS) -> List[FiberComponentCircle]:
    """All fiber components over a circle barcode, sorted by normal form.

    Candidate cyclic arrangements of the minima ``{b0} + births`` and maxima
    ``{b1} + deaths`` are kept when their canonical representative has barcode
    ``d``.  An empty list means no circle function realises ``d``.
    """
    b0, b1, bounded = _check_circle_barcode(d)
    if close(b0, b1):
        cls = CyclicClass(None, b0)
        return [FiberComponentCircle(d, cls, canonical_representative(cls))]
    if not allow_repeated and not has_distinct_endpoints(d):
        raise RepeatedEndpoints("bounded endpoints repeat; pass allow_repeated=True to enumerate anyway")
    minima = [b0] + [b.birth for b in bounded]
    maxima = [b1] + [b.death for b in bounded]
    n = len(minima)
    if n > max_pairs:
        raise TooLarge(f"{n} extrema pairs exceeds the enumeration limit {max_pairs}")
    seen = {}
    # rotations are identified, so the global minimum opens every arrangement
    rest = minima[1:]
    for mins in set(itertools.permutations(rest)):
        for maxs in set(itertools.permutations(maxima)):
            order = (b0,) + mins
            vals = tuple(v for pair in zip(order, maxs) for v in pair)
            if any(compare(vals[i], vals[(i + 1) % len(vals)]) >= 0 for i in range(0, len(vals), 2)):
                continue
            if any(compare(vals[i], vals[(i + 1) % len(vals)]) <= 0 for i in range(1, len(vals), 2)):
                continue
            cls = CyclicClass.from_values(vals)
            key = cls.normal_form.values
            if key in seen:
                continue
            canon = canonical_representative(cls)
            if same_barcode(barcode(canon), d):
                seen[key] = FiberComponentCircle(d, cls, canon)
            else:
                seen[key] = None
    return [seen[k] for k in sorted(seen) if seen[k] is not None]


def stabilizer_rotations(cls: CyclicClass) -> List[Reparametrization]:
    """Reparametrizations fixing the canonical representative, one per valid shift."""
    comp = FiberComponentCircle(barcode(canonical_representative(cls)), cls, canonical_representative(cls))
    f = comp.canonical
    return [reparametrization(f, comp, k) for k in valid_shifts(f, comp)]
