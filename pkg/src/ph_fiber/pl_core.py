"""Piecewise-linear functions on the unit interval and the unit circle.

The circle is R/Z parametrised by [0, 1) with 0 as the base point ("north
pole").  A :class:`PLFunction` is determined by its breakpoints and values and
is affine in between; on the circle the last segment wraps back to 0.

A :class:`Reparametrization` is a monotone degree-one PL self-map.  On the
circle it is stored through a lift ``Phi`` on [0, 1] with
``Phi(1) = Phi(0) + 1``; flat pieces are allowed, so non-injective maps
(the closure of the homeomorphism group) are representable.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .errors import ConstantFunction, DomainMismatch
from .numeric import Number, as_number, close, compare, to_jsonable


class DomainKind(enum.Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"

    @classmethod
    def parse(cls, value) -> "DomainKind":
        if isinstance(value, DomainKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown domain {value!r}; expected 'circle' or 'interval'") from None


def _floor(x: Number) -> int:
    return math.floor(x)


def _frac(x: Number) -> Number:
    return x - math.floor(x)


def _interp(t: Number, t0: Number, t1: Number, v0: Number, v1: Number) -> Number:
    if t == t0 or v0 == v1:
        return v0
    if t == t1:
        return v1
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


@dataclass(frozen=True)
class PLFunction:
    domain: DomainKind
    breakpoints: Tuple[Number, ...]
    values: Tuple[Number, ...]

    def __post_init__(self):
        domain = DomainKind.parse(self.domain)
        ts = tuple(as_number(t) for t in self.breakpoints)
        vs = tuple(as_number(v) for v in self.values)
        if not ts:
            raise ValueError("a PL function needs at least one breakpoint")
        if len(ts) != len(vs):
            raise ValueError("breakpoints and values differ in length")
        if ts[0] != 0:
            raise ValueError("first breakpoint must be 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if domain is DomainKind.CIRCLE:
            if ts[-1] >= 1:
                raise ValueError("circle breakpoints must lie in [0, 1)")
        else:
            if len(ts) < 2 or ts[-1] != 1:
                raise ValueError("interval breakpoints must start at 0 and end at 1")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "breakpoints", ts)
        object.__setattr__(self, "values", vs)

    @classmethod
    def constant(cls, domain, c) -> "PLFunction":
        domain = DomainKind.parse(domain)
        if domain is DomainKind.CIRCLE:
            return cls(domain, (0,), (c,))
        return cls(domain, (0, 1), (c, c))

    @property
    def is_circle(self) -> bool:
        return self.domain is DomainKind.CIRCLE

    def __call__(self, t) -> Number:
        return evaluate(self, t)

    def segments(self) -> Iterator[Tuple[Number, Number, Number, Number]]:
        """Yield ``(t0, t1, v0, v1)`` for every affine piece, including the wrap on the circle."""
        ts, vs = self.breakpoints, self.values
        for i in range(len(ts) - 1):
            yield ts[i], ts[i + 1], vs[i], vs[i + 1]
        if self.is_circle:
            yield ts[-1], ts[0] + 1, vs[-1], vs[0]

    def sample(self, count: int) -> List[Tuple[Number, Number]]:
        """``count`` evenly spaced ``(t, f(t))`` pairs (endpoint 1 included on the interval)."""
        if self.is_circle:
            grid = [Fraction(i, count) for i in range(count)]
        else:
            grid = [Fraction(i, count - 1) for i in range(count)]
        return [(t, evaluate(self, t)) for t in grid]

    def to_json(self) -> dict:
        return {
            "domain": self.domain.value,
            "breakpoints": [to_jsonable(t) for t in self.breakpoints],
            "values": [to_jsonable(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLFunction":
        try:
            return cls(DomainKind.parse(data["domain"]), tuple(data["breakpoints"]), tuple(data["values"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed PL function JSON: {exc}") from None


def evaluate(f: PLFunction, t) -> Number:
    """Exact affine interpolation of ``f`` at ``t`` (taken mod 1 on the circle)."""
    t = as_number(t)
    ts, vs = f.breakpoints, f.values
    if f.is_circle:
        t = _frac(t)
    elif t < 0 or t > 1:
        raise ValueError(f"parameter {t} outside [0, 1]")
    i = bisect.bisect_right(ts, t) - 1
    if ts[i] == t:
        return vs[i]
    if i + 1 < len(ts):
        return _interp(t, ts[i], ts[i + 1], vs[i], vs[i + 1])
    # circle wrap segment
    return _interp(t, ts[i], ts[0] + 1, vs[i], vs[0])


# --------------------------------------------------------------------------
# extrema


@dataclass(frozen=True)
class ExtremaSequence:
    """Alternating extremal values, in reading order from the base point.

    On the circle the sequence is ``m1 < M1 > m2 < ... < Mn`` (even length);
    on the interval it may start and end with either kind.
    """

    domain: DomainKind
    values: Tuple[Number, ...]
    starts_with_min: bool = True

    def __post_init__(self):
        domain = DomainKind.parse(self.domain)
        vals = tuple(as_number(v) for v in self.values)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", vals)
        if domain is DomainKind.CIRCLE:
            if len(vals) % 2 or not vals:
                raise ValueError("circle extrema sequences have even positive length")
            if not self.starts_with_min:
                raise ValueError("circle extrema sequences start with a minimum")
        elif not vals:
            raise ValueError("empty extrema sequence")
        k = len(vals)
        pairs = [(i, i + 1) for i in range(k - 1)]
        if domain is DomainKind.CIRCLE and k > 1:
            pairs.append((k - 1, 0))
        for i, j in pairs:
            is_min = (i % 2 == 0) == self.starts_with_min
            expected = -1 if is_min else 1
            if compare(vals[i], vals[j]) != expected:
                raise ValueError(f"extrema sequence {vals} does not alternate at position {i}")

    @property
    def n(self) -> int:
        return len(self.values) // 2

    def pairs(self) -> List[Tuple[Number, Number]]:
        v = self.values
        return [(v[2 * i], v[2 * i + 1]) for i in range(len(v) // 2)]

    def minima(self) -> List[Number]:
        start = 0 if self.starts_with_min else 1
        return list(self.values[start::2])

    def maxima(self) -> List[Number]:
        start = 1 if self.starts_with_min else 0
        return list(self.values[start::2])

    def rotate(self, k: int) -> "ExtremaSequence":
        """Cyclic shift by ``k`` (min, max) pairs: entry ``i`` of the result is pair ``i + k``."""
        if self.domain is not DomainKind.CIRCLE:
            raise DomainMismatch("only circle sequences can be rotated")
        p = self.pairs()
        k %= len(p)
        rotated = p[k:] + p[:k]
        return ExtremaSequence(self.domain, tuple(v for pair in rotated for v in pair))

    def to_json(self) -> dict:
        return {
            "domain": self.domain.value,
            "values": [to_jsonable(v) for v in self.values],
            "starts_with_min": self.starts_with_min,
        }


class CriticalSets(NamedTuple):
    """Critical arcs ``(lo, hi)`` in the order of the extrema sequence.

    ``lo`` lies in [0, 1); on the circle an arc crossing the base point has
    ``hi >= 1`` (read ``hi`` mod 1).  Singletons have ``lo == hi``.
    """

    arcs: Tuple[Tuple[Number, Number], ...]

    def to_json(self) -> list:
        return [[to_jsonable(lo), to_jsonable(hi)] for lo, hi in self.arcs]


class _Run(NamedTuple):
    value: Number
    is_min: bool
    first: int  # breakpoint index where the plateau starts
    length: int  # number of breakpoints in the plateau (indices wrap on the circle)


def _plateaus(f: PLFunction) -> List[Tuple[int, int]]:
    """Maximal runs ``(first, length)`` of consecutive equal values, in reading order."""
    vs = f.values
    k = len(vs)
    if f.is_circle:
        start = None
        for i in range(k):
            if not close(vs[i - 1], vs[i]):
                start = i
                break
        if start is None:
            raise ConstantFunction("constant function has no extrema")
        runs: List[Tuple[int, int]] = []
        i = 0
        while i < k:
            j = i + 1
            while j < k and close(vs[(start + j) % k], vs[(start + j - 1) % k]):
                j += 1
            runs.append(((start + i) % k, j - i))
            i = j
        runs.sort(key=lambda r: r[0])
        return runs
    runs = []
    i = 0
    while i < k:
        j = i + 1
        while j < k and close(vs[j], vs[j - 1]):
            j += 1
        runs.append((i, j - i))
        i = j
    if len(runs) == 1:
        raise ConstantFunction("constant function has no extrema")
    return runs


def _extremal_runs(f: PLFunction) -> List[_Run]:
    """Extremal plateaus of ``f`` in extrema-sequence order (circle: first one is a minimum)."""
    vs = f.values
    plateaus = _plateaus(f)
    m = len(plateaus)
    runs: List[_Run] = []
    for idx, (first, length) in enumerate(plateaus):
        value = vs[first]
        if f.is_circle:
            neighbours = [plateaus[idx - 1], plateaus[(idx + 1) % m]]
        else:
            neighbours = [plateaus[j] for j in (idx - 1, idx + 1) if 0 <= j < m]
        signs = {compare(vs[p[0]], value) for p in neighbours}
        if signs == {1}:
            runs.append(_Run(value, True, first, length))
        elif signs == {-1}:
            runs.append(_Run(value, False, first, length))
    if not f.is_circle:
        return runs
    # reading order from the base point; the first minimum met opens the sequence
    k = len(vs)
    ts = f.breakpoints
    base = _base_point(f, runs)
    def key(run: _Run) -> Number:
        lo, hi = _arc(ts, run.first, run.length, k)
        if _arc_contains(lo, hi, base):
            return Fraction(-1)
        return _frac(lo - base)
    order = sorted(range(len(runs)), key=lambda i: key(runs[i]))
    start = order[0]
    while not runs[start].is_min:
        start = (start + 1) % len(runs)
    return runs[start:] + runs[:start]


def _arc(ts: Sequence[Number], first: int, length: int, k: int) -> Tuple[Number, Number]:
    lo = ts[first]
    last = first + length - 1
    hi = ts[last % k] + (last // k)
    return lo, hi


def _arc_contains(lo: Number, hi: Number, t: Number) -> bool:
    return lo <= t <= hi or lo <= t + 1 <= hi


def _base_point(f: PLFunction, runs: List[_Run]) -> Number:
    """0, unless 0 is interior to a critical arc; then the midpoint of the longest monotone arc."""
    ts = f.breakpoints
    k = len(ts)
    arcs = [_arc(ts, r.first, r.length, k) for r in runs]
    if not any(lo < 1 < hi for lo, hi in arcs):
        return Fraction(0)
    # runs are sorted by breakpoint index; gaps between consecutive arcs are monotone
    best = None
    for i, (lo, hi) in enumerate(arcs):
        nlo, _ = arcs[(i + 1) % len(arcs)]
        end = nlo if nlo > hi else nlo + 1
        while end < hi:
            end += 1
        gap = end - hi
        if best is None or gap > best[0]:
            best = (gap, hi)
    gap, hi = best
    return _frac(hi + gap / 2)


def extrema(f: PLFunction) -> Tuple[ExtremaSequence, CriticalSets]:
    """Extremal values ``Val(f)`` and critical sets ``Seq(f)`` of a non-constant ``f``.

    Raises :class:`ConstantFunction` when ``f`` takes a single value.
    """
    runs = _extremal_runs(f)
    k = len(f.breakpoints)
    seq = ExtremaSequence(f.domain, tuple(r.value for r in runs), runs[0].is_min)
    arcs = tuple(_arc(f.breakpoints, r.first, r.length, k) for r in runs)
    return seq, CriticalSets(arcs)


def normalize_cyclic(seq: ExtremaSequence) -> ExtremaSequence:
    """Lexicographically minimal rotation of the (min, max) pairs."""
    if seq.domain is not DomainKind.CIRCLE:
        raise DomainMismatch("normal forms are defined for circle sequences")
    pairs = seq.pairs()
    n = len(pairs)
    best = min(range(n), key=lambda k: pairs[k:] + pairs[:k])
    return seq.rotate(best)


def cyclic_shifts(source: ExtremaSequence, target: ExtremaSequence) -> List[int]:
    """All ``k`` with ``target.pairs()[i] == source.pairs()[(i + k) % n]`` (tolerance-aware)."""
    a, b = source.values, target.values
    if len(a) != len(b):
        return []
    n = len(a) // 2
    out = []
    for k in range(n):
        if all(close(b[j], a[(j + 2 * k) % len(a)]) for j in range(len(a))):
            out.append(k)
    return out


# --------------------------------------------------------------------------
# reparametrizations


@dataclass(frozen=True)
class Reparametrization:
    """Monotone PL self-map given by matched breakpoints ``(s_i, phi_i)``.

    On the circle ``phi`` holds lift values: the lift is
    ``Phi(s) = phi(s) + lift_offset`` on [0, 1] and the segment from the last
    breakpoint to 1 ends at ``Phi(0) + 1``.
    """

    domain: DomainKind
    s: Tuple[Number, ...]
    phi: Tuple[Number, ...]
    lift_offset: int = 0

    def __post_init__(self):
        domain = DomainKind.parse(self.domain)
        s = tuple(as_number(x) for x in self.s)
        phi = tuple(as_number(x) for x in self.phi)
        if not s or len(s) != len(phi):
            raise ValueError("s and phi must be non-empty and of equal length")
        if s[0] != 0 or any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError("s must start at 0 and increase strictly")
        if any(compare(b, a) < 0 for a, b in zip(phi, phi[1:])):
            raise ValueError("reparametrization must be non-decreasing")
        if domain is DomainKind.CIRCLE:
            if s[-1] >= 1:
                raise ValueError("circle breakpoints must lie in [0, 1)")
            if compare(phi[-1], phi[0] + 1) > 0:
                raise ValueError("circle lift must satisfy Phi(last) <= Phi(0) + 1")
        else:
            if s[-1] != 1:
                raise ValueError("interval reparametrization must have s ending at 1")
            if not (close(phi[0], 0) and close(phi[-1], 1)):
                raise ValueError("interval reparametrization must fix 0 and 1")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "lift_offset", int(self.lift_offset))

    @property
    def is_circle(self) -> bool:
        return self.domain is DomainKind.CIRCLE

    def lift_points(self) -> List[Tuple[Number, Number]]:
        """Breakpoints of the lift on [0, 1], closing point included on the circle."""
        pts = [(s, p + self.lift_offset) for s, p in zip(self.s, self.phi)]
        if self.is_circle:
            pts.append((Fraction(1), pts[0][1] + 1))
        return pts

    def lift(self, x) -> Number:
        """The lift ``Phi``; on the circle extended by ``Phi(x + k) = Phi(x) + k``."""
        x = as_number(x)
        shift = 0
        if self.is_circle:
            shift = _floor(x)
            x = x - shift
        elif x < 0 or x > 1:
            raise ValueError(f"parameter {x} outside [0, 1]")
        pts = self.lift_points()
        ss = [p[0] for p in pts]
        i = bisect.bisect_right(ss, x) - 1
        if i == len(pts) - 1:
            return pts[i][1] + shift
        (s0, p0), (s1, p1) = pts[i], pts[i + 1]
        return _interp(x, s0, s1, p0, p1) + shift

    def __call__(self, x) -> Number:
        y = self.lift(x)
        return _frac(y) if self.is_circle else y

    def to_json(self) -> dict:
        return {
            "domain": self.domain.value,
            "s": [to_jsonable(x) for x in self.s],
            "phi": [to_jsonable(x) for x in self.phi],
            "lift_offset": self.lift_offset,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Reparametrization":
        try:
            return cls(DomainKind.parse(data["domain"]), tuple(data["s"]), tuple(data["phi"]),
                       int(data.get("lift_offset", 0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed reparametrization JSON: {exc}") from None

    @classmethod
    def from_lift(cls, domain, points: Sequence[Tuple[Number, Number]]) -> "Reparametrization":
        """Build from ``(s, Phi(s))`` pairs; on the circle a closing point at ``s = 1`` is dropped."""
        domain = DomainKind.parse(domain)
        pts = [(as_number(s), as_number(p)) for s, p in points]
        if domain is DomainKind.CIRCLE and pts and pts[-1][0] == 1:
            pts = pts[:-1]
        pts = _drop_collinear(pts, periodic_end=(Fraction(1), pts[0][1] + 1) if domain is DomainKind.CIRCLE else None)
        return cls(domain, tuple(p[0] for p in pts), tuple(p[1] for p in pts))


def identity(domain) -> Reparametrization:
    domain = DomainKind.parse(domain)
    if domain is DomainKind.CIRCLE:
        return Reparametrization(domain, (0,), (0,))
    return Reparametrization(domain, (0, 1), (0, 1))


def rotation(r) -> Reparametrization:
    """Circle rotation ``t -> t + r``."""
    return Reparametrization(DomainKind.CIRCLE, (0,), (as_number(r),))


def _drop_collinear(pts: List[Tuple[Number, Number]], periodic_end=None) -> List[Tuple[Number, Number]]:
    """Remove interior points lying on the segment through their neighbours (exact only)."""
    if len(pts) < 3 and periodic_end is None:
        return pts
    out = [pts[0]]
    tail = list(pts[1:]) + ([periodic_end] if periodic_end is not None else [])
    for i, p in enumerate(tail):
        if i == len(tail) - 1:
            out.append(p)
            break
        a, b = out[-1], tail[i + 1]
        if (b[0] - a[0]) * (p[1] - a[1]) == (p[0] - a[0]) * (b[1] - a[1]):
            continue
        out.append(p)
    if periodic_end is not None:
        out = out[:-1]
    return out


def _pullback(outer_breakpoints: Sequence[Number], periodic: bool,
              inner: Reparametrization) -> List[Number]:
    """Parameters at which ``outer o inner`` may bend: inner's breakpoints and preimages of outer's."""
    pts = set(inner.s)
    if not periodic:
        pts.add(Fraction(1))
    lp = inner.lift_points()
    obs = list(outer_breakpoints)
    for (s0, a), (s1, b) in zip(lp, lp[1:]):
        if b == a:
            continue
        lo, hi = (_floor(a), _floor(b)) if periodic else (0, 0)
        for k in range(lo, hi + 1):
            left = bisect.bisect_right(obs, a - k)
            right = bisect.bisect_left(obs, b - k)
            for t in obs[left:right]:
                y = t + k
                pts.add(s0 + (y - a) * (s1 - s0) / (b - a))
    return sorted(p for p in pts if (p < 1 or not periodic))


def _dedupe(ts: List[Number]) -> List[Number]:
    out: List[Number] = []
    for t in ts:
        if out and close(t, out[-1]):
            continue
        out.append(t)
    return out


def compose(f: PLFunction, phi: Reparametrization) -> PLFunction:
    """The PL function ``f o phi``; its breakpoints make the result exactly PL."""
    if f.domain is not phi.domain:
        raise DomainMismatch(f"cannot compose a {f.domain.value} function with a {phi.domain.value} map")
    ts = _dedupe(_pullback(f.breakpoints, f.is_circle, phi))
    if not f.is_circle and ts[-1] != 1:
        ts[-1] = Fraction(1)
    pts = [(t, evaluate(f, _frac(phi.lift(t)) if f.is_circle else phi.lift(t))) for t in ts]
    pts = _drop_collinear(pts, periodic_end=(Fraction(1), pts[0][1]) if f.is_circle else None)
    return PLFunction(f.domain, tuple(p[0] for p in pts), tuple(p[1] for p in pts))


def compose_reparametrizations(phi: Reparametrization, psi: Reparametrization) -> Reparametrization:
    """``phi o psi``."""
    if phi.domain is not psi.domain:
        raise DomainMismatch("reparametrizations live on different domains")
    ts = _dedupe(_pullback(phi.s, phi.is_circle, psi))
    return Reparametrization.from_lift(phi.domain, [(t, phi.lift(psi.lift(t))) for t in ts])


def interpolate_lifts(phi: Reparametrization, psi: Reparametrization, t, offset: int = 0) -> Reparametrization:
    """Straight-line homotopy ``(1 - t) Phi + t (Psi + offset)`` between two lifts."""
    if phi.domain is not psi.domain:
        raise DomainMismatch("reparametrizations live on different domains")
    t = as_number(t)
    ss = sorted(set(phi.s) | set(psi.s))
    vals = tuple((1 - t) * phi.lift(s) + t * (psi.lift(s) + offset) for s in ss)
    return Reparametrization(phi.domain, tuple(ss), vals)


def _eval_float(f: PLFunction, x: np.ndarray) -> np.ndarray:
    ts = np.array([float(t) for t in f.breakpoints])
    vs = np.array([float(v) for v in f.values])
    if f.is_circle:
        ts = np.append(ts, 1.0)
        vs = np.append(vs, vs[0])
        x = np.mod(x, 1.0)
    return np.interp(x, ts, vs)


def max_residual(f: PLFunction, g: PLFunction, phi: Reparametrization, samples: int = 1000) -> float:
    """Largest ``|g(phi(t)) - f(t)|`` over ``samples`` evenly spaced parameters, in floating point."""
    t = np.arange(samples) / samples if f.is_circle else np.linspace(0.0, 1.0, samples)
    pts = phi.lift_points()
    lift = np.interp(t, [float(p[0]) for p in pts], [float(p[1]) for p in pts])
    return float(np.max(np.abs(_eval_float(g, lift) - _eval_float(f, t))))
