"""Sublevel-set persistence of PL functions in degrees 0 and 1.

``barcode`` pairs extrema directly with the elder rule; ``barcode_bruteforce``
is an independent union-find sweep over a sampled grid and serves as its
oracle.  ``bottleneck_distance`` is the usual min-max matching distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import ConstantFunction, ResolutionTooLow
from .numeric import INF, Number, as_number, close, compare, epsilon, is_exact, to_jsonable
from .pl_core import PLFunction, _extremal_runs, evaluate


@dataclass(frozen=True, order=True)
class Bar:
    degree: int
    birth: Number
    death: Number = INF

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ValueError(f"degree must be 0, 1 or 2, got {self.degree}")
        birth = as_number(self.birth)
        death = as_number(self.death, allow_inf=True)
        if not birth < death:
            raise ValueError(f"bar needs birth < death, got ({birth}, {death})")
        object.__setattr__(self, "birth", birth)
        object.__setattr__(self, "death", death)

    @property
    def infinite(self) -> bool:
        return math.isinf(self.death)

    def to_json(self) -> dict:
        return {"degree": self.degree, "birth": to_jsonable(self.birth), "death": to_jsonable(self.death)}


class Barcode:
    """Multiset of bars, kept sorted by (degree, birth, death)."""

    __slots__ = ("bars",)

    def __init__(self, bars: Iterable[Bar] = ()):
        self.bars: Tuple[Bar, ...] = tuple(sorted(bars, key=_bar_key))

    def degree(self, k: int) -> List[Bar]:
        return [b for b in self.bars if b.degree == k]

    def bounded(self, k: Optional[int] = None) -> List[Bar]:
        return [b for b in self.bars if not b.infinite and (k is None or b.degree == k)]

    def infinite(self, k: Optional[int] = None) -> List[Bar]:
        return [b for b in self.bars if b.infinite and (k is None or b.degree == k)]

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def __eq__(self, other) -> bool:
        return isinstance(other, Barcode) and self.bars == other.bars

    def __hash__(self) -> int:
        return hash(self.bars)

    def __repr__(self) -> str:
        inner = ", ".join(f"({_fmt(b.birth)}, {_fmt(b.death)})_{b.degree}" for b in self.bars)
        return f"Barcode([{inner}])"

    def to_json(self) -> dict:
        return {"bars": [b.to_json() for b in self.bars]}

    @classmethod
    def from_json(cls, data: dict) -> "Barcode":
        try:
            return cls(Bar(int(b["degree"]), b["birth"], b.get("death", "inf")) for b in data["bars"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed barcode JSON: {exc}") from None

    @classmethod
    def of(cls, *triples) -> "Barcode":
        """Shorthand: ``Barcode.of((0, 0), (0, '0.2', '0.8'), (1, 1))`` with ``(degree, birth[, death])``."""
        return cls(Bar(*t) for t in triples)


def _bar_key(b: Bar):
    return (b.degree, b.birth, b.death)


def _fmt(x: Number) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return str(x)


def trivial_barcode(f: PLFunction) -> Barcode:
    c = f.values[0]
    if f.is_circle:
        return Barcode([Bar(0, c), Bar(1, c)])
    return Barcode([Bar(0, c)])


def barcode(f: PLFunction) -> Barcode:
    """Persistence barcode of the sublevel filtration of ``f``.

    Minima are births; each maximum joins the components of its two
    neighbouring minima and kills the younger one.  On the circle the last
    maximum closes the loop and starts the infinite degree-1 bar.
    """
    try:
        runs = _extremal_runs(f)
    except ConstantFunction:
        return trivial_barcode(f)
    k = len(runs)
    parent = list(range(k))
    # elder rule: lower birth survives; ties go to the smaller base parameter
    age = {i: (runs[i].value, f.breakpoints[runs[i].first]) for i in range(k) if runs[i].is_min}

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    bars: List[Bar] = []
    maxima = sorted((i for i in range(k) if not runs[i].is_min),
                    key=lambda i: (runs[i].value, f.breakpoints[runs[i].first]))
    for i in maxima:
        if f.is_circle:
            nbrs = [(i - 1) % k, (i + 1) % k]
        else:
            nbrs = [j for j in (i - 1, i + 1) if 0 <= j < k]
        if len(nbrs) < 2:
            continue  # boundary maximum: no topological change
        a, b = find(nbrs[0]), find(nbrs[1])
        if a == b:
            bars.append(Bar(1, runs[i].value))
            continue
        old, young = (a, b) if age[a] <= age[b] else (b, a)
        bars.append(Bar(0, runs[young].value, runs[i].value))
        parent[young] = old
    roots = {find(i) for i in age}
    for r in roots:
        bars.append(Bar(0, runs[r].value))
    return Barcode(bars)


def minimal_resolution(f: PLFunction, at_least: Optional[int] = None) -> int:
    """Smallest grid size that hits every (rational) breakpoint and is >= 10x their count."""
    floor = at_least if at_least is not None else 10 * len(f.breakpoints)
    if not all(is_exact(t) for t in f.breakpoints):
        raise ResolutionTooLow("breakpoints are not rational; no uniform grid is guaranteed to hit them")
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(t).denominator for t in f.breakpoints), 1)
    return lcm * max(1, -(-floor // lcm))


def barcode_bruteforce(f: PLFunction, resolution: int) -> Barcode:
    """Union-find sweep over ``resolution`` evenly spaced samples.

    Every breakpoint must sit on the sample grid, otherwise an extremum could
    fall between samples and :class:`ResolutionTooLow` is raised.
    """
    nbp = len(f.breakpoints)
    if resolution < 10 * nbp:
        raise ResolutionTooLow(f"resolution {resolution} < 10 x {nbp} breakpoints")
    for t in f.breakpoints:
        pos = t * resolution
        if not close(pos, round(pos)):
            raise ResolutionTooLow(f"breakpoint {t} falls between grid samples at resolution {resolution}")
    if f.is_circle:
        params = [Fraction(i, resolution) for i in range(resolution)]
    else:
        params = [Fraction(i, resolution) for i in range(resolution + 1)]
    values = [evaluate(f, t) for t in params]
    m = len(values)
    cyclic = f.is_circle

    parent = list(range(m))
    birth: Dict[int, Tuple[Number, int]] = {}
    present = [False] * m

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # group sample indices by value (tolerance-aware)
    order = sorted(range(m), key=lambda i: (values[i], i))
    levels: List[List[int]] = []
    for i in order:
        if levels and close(values[levels[-1][0]], values[i]):
            levels[-1].append(i)
        else:
            levels.append([i])

    bars: List[Bar] = []
    done = set()  # edges (i, i + 1) keyed by i
    for level in levels:
        h = values[level[0]]
        for i in level:
            present[i] = True
            birth[i] = (values[i], i)
        for i in level:
            for e in (i - 1, i):
                if cyclic:
                    e %= m
                elif not 0 <= e < m - 1:
                    continue
                u, v = e, (e + 1) % m
                if e in done or not (present[u] and present[v]):
                    continue
                done.add(e)
                a, b = find(u), find(v)
                if a == b:
                    bars.append(Bar(1, h))
                    continue
                old, young = (a, b) if birth[a] <= birth[b] else (b, a)
                if compare(birth[young][0], h) < 0:
                    bars.append(Bar(0, birth[young][0], h))
                parent[young] = old
    roots = {find(i) for i in range(m)}
    for r in roots:
        bars.append(Bar(0, birth[r][0]))
    return Barcode(bars)


def _bar_cost(a: Bar, b: Bar) -> Number:
    if a.infinite != b.infinite:
        return INF
    if a.infinite:
        return abs(a.birth - b.birth)
    return max(abs(a.birth - b.birth), abs(a.death - b.death))


def _diag_cost(a: Bar) -> Number:
    return INF if a.infinite else (a.death - a.birth) / 2


def _degree_bottleneck(xs: Sequence[Bar], ys: Sequence[Bar]) -> Number:
    if len([b for b in xs if b.infinite]) != len([b for b in ys if b.infinite]):
        return INF
    p, q = len(xs), len(ys)
    size = p + q
    if size == 0:
        return Fraction(0)
    # rows: xs then diagonal copies of ys; columns: ys then diagonal copies of xs
    cost = [[INF] * size for _ in range(size)]
    for i, a in enumerate(xs):
        for j, b in enumerate(ys):
            cost[i][j] = _bar_cost(a, b)
        cost[i][q + i] = _diag_cost(a)
    for j, b in enumerate(ys):
        cost[p + j][j] = _diag_cost(b)
        for i in range(p):
            cost[p + j][q + i] = Fraction(0)
    candidates = sorted({c for row in cost for c in row if not (isinstance(c, float) and math.isinf(c))})

    def feasible(eps: Number) -> bool:
        rows, cols = [], []
        for i in range(size):
            for j in range(size):
                if cost[i][j] <= eps:
                    rows.append(i)
                    cols.append(j)
        graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
        match = maximum_bipartite_matching(graph, perm_type="column")
        return bool(np.all(match >= 0))

    lo, hi = 0, len(candidates) - 1
    if not feasible(candidates[hi]):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_distance(d1: Barcode, d2: Barcode) -> Number:
    """Bottleneck distance, the maximum of the per-degree distances.

    Infinite bars only match infinite bars of the same degree; a count
    mismatch gives ``inf``.  Exact when all endpoints are rational.
    """
    degrees = {b.degree for b in d1} | {b.degree for b in d2}
    out: Number = Fraction(0)
    for k in sorted(degrees):
        out = max(out, _degree_bottleneck(d1.degree(k), d2.degree(k)))
    return out


def same_barcode(d1: Barcode, d2: Barcode) -> bool:
    """Multiset equality per degree, endpoints compared under the module tolerance."""
    if len(d1) != len(d2):
        return False
    for a, b in zip(d1.bars, d2.bars):
        if a.degree != b.degree or not close(a.birth, b.birth) or not close(a.death, b.death):
            return False
    return True


def has_distinct_endpoints(d: Barcode) -> bool:
    """True when the endpoints of all bounded bars are pairwise distinct."""
    ends: List[Number] = []
    for b in d.bounded():
        ends.extend([b.birth, b.death])
    ends.sort()
    return all(not close(a, b) for a, b in zip(ends, ends[1:]))


__all__ = [
    "Bar", "Barcode", "barcode", "barcode_bruteforce", "bottleneck_distance",
    "same_barcode", "minimal_resolution", "trivial_barcode", "has_distinct_endpoints",
]
