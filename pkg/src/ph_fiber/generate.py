"""Seeded random instances with rational data, for tests and the ``gen`` command.

Functions are built from an alternating value sequence: every extremum may be
widened into a plateau and monotone stretches may carry extra breakpoints, so
the generated breakpoints are not just the extrema.  All parameters sit on a
common grid ``k / grid`` which keeps the brute-force oracle affordable.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .pl_core import DomainKind, ExtremaSequence, PLFunction, Reparametrization, cyclic_shifts


def _between(rng: random.Random, a: Fraction, b: Fraction) -> Fraction:
    q = rng.randint(2, 5)
    return a + (b - a) * Fraction(rng.randint(1, q - 1), q)


def alternating_values(rng: random.Random, length: int, starts_with_min: bool = True, cyclic: bool = False,
                       distinct: bool = True, denom: int = 20, spread: int = 10) -> Tuple[Fraction, ...]:
    """Random strictly alternating sequence of ``length`` rationals.

    ``cyclic`` also enforces alternation across the wrap (``length`` must be even).
    """
    if cyclic and length % 2:
        raise ValueError("cyclic sequences have even length")
    for _ in range(1000):
        pool = rng.sample(range(spread * denom), length) if distinct else \
            [rng.randrange(spread * denom) for _ in range(length)]
        pool.sort()
        # lowest values go to minima so alternation is likely, then shuffle within roles
        n_min = (length + (1 if starts_with_min else 0)) // 2 if not cyclic else length // 2
        lows, highs = pool[:n_min], pool[n_min:]
        rng.shuffle(lows)
        rng.shuffle(highs)
        vals: List[int] = []
        for i in range(length):
            is_min = (i % 2 == 0) == starts_with_min
            vals.append(lows.pop() if is_min else highs.pop())
        if _alternates(vals, starts_with_min, cyclic):
            return tuple(Fraction(v, denom) for v in vals)
    raise RuntimeError("could not draw an alternating sequence")  # pragma: no cover


def _alternates(vals: Sequence, starts_with_min: bool, cyclic: bool) -> bool:
    k = len(vals)
    pairs = range(k) if cyclic else range(k - 1)
    for i in pairs:
        up = (i % 2 == 0) == starts_with_min
        a, b = vals[i], vals[(i + 1) % k]
        if (a >= b) if up else (a <= b):
            return False
    return k > 1 or not cyclic


def _profile(rng: random.Random, vals: Sequence[Fraction], cyclic: bool, plateaus: bool,
             passthrough: bool) -> List[Fraction]:
    """Breakpoint values realising ``vals`` as the extrema, in order."""
    out: List[Fraction] = []
    k = len(vals)
    for i, v in enumerate(vals):
        out.append(v)
        if plateaus and rng.random() < 0.25:
            out.append(v)
        if i == k - 1 and not cyclic:
            break
        nxt = vals[(i + 1) % k]
        if passthrough:
            mids = sorted(_between(rng, v, nxt) for _ in range(rng.randint(0, 2)))
            if nxt < v:
                mids.reverse()
            for m in mids:
                if m != v and m != nxt and (not out or out[-1] != m):
                    out.append(m)
    return out


def _grid_points(rng: random.Random, count: int, grid: int, interval: bool) -> List[Fraction]:
    if interval:
        inner = sorted(rng.sample(range(1, grid), count - 2))
        return [Fraction(0)] + [Fraction(i, grid) for i in inner] + [Fraction(1)]
    return [Fraction(0)] + [Fraction(i, grid) for i in sorted(rng.sample(range(1, grid), count - 1))]


def function_with_values(rng: random.Random, domain, vals: Sequence, plateaus: bool = True,
                         passthrough: bool = True, grid: Optional[int] = None) -> PLFunction:
    """Random PL function whose extrema sequence is ``vals`` (up to rotation on the circle)."""
    domain = DomainKind.parse(domain)
    vals = [Fraction(v) for v in vals]
    cyclic = domain is DomainKind.CIRCLE
    profile = _profile(rng, vals, cyclic, plateaus, passthrough)
    count = len(profile)
    grid = grid or max(4 * count, 24)
    ts = _grid_points(rng, count, grid, not cyclic)
    if cyclic:
        r = rng.randrange(count)
        profile = profile[r:] + profile[:r]
    return PLFunction(domain, tuple(ts), tuple(profile))


def random_function(rng: random.Random, domain, n: Optional[int] = None, max_n: int = 6,
                    distinct: bool = True, **kw) -> PLFunction:
    """Random non-constant function with ``n`` extrema pairs (circle) or about ``n`` minima (interval)."""
    domain = DomainKind.parse(domain)
    n = n if n is not None else rng.randint(1, max_n)
    if domain is DomainKind.CIRCLE:
        vals = alternating_values(rng, 2 * n, True, cyclic=True, distinct=distinct)
    else:
        starts_min = rng.random() < 0.5
        length = rng.randint(max(2, 2 * n - 1), 2 * n + 1)
        vals = alternating_values(rng, length, starts_min, distinct=distinct)
    return function_with_values(rng, domain, vals, **kw)


def random_reparametrization(rng: random.Random, domain, pieces: int = 4, injective: bool = False,
                             grid: int = 48) -> Reparametrization:
    """Random monotone map; when not ``injective`` some pieces are flat."""
    domain = DomainKind.parse(domain)
    flat = not injective and rng.random() < 0.8

    def heights(count: int) -> List[int]:
        if flat:
            return sorted(rng.randint(0, grid) for _ in range(count))
        return sorted(rng.sample(range(1, grid), count))

    if domain is DomainKind.INTERVAL:
        s = [Fraction(0)] + [Fraction(i, grid) for i in sorted(rng.sample(range(1, grid), pieces - 1))] + [Fraction(1)]
        inner = heights(pieces - 1)
        if flat and pieces > 1:
            inner[rng.randrange(len(inner))] = inner[0]
            inner.sort()
        phi = [Fraction(0)] + [Fraction(h, grid) for h in inner] + [Fraction(1)]
        return Reparametrization(domain, tuple(s), tuple(phi))
    s = [Fraction(0)] + [Fraction(i, grid) for i in sorted(rng.sample(range(1, grid), pieces - 1))]
    start = Fraction(rng.randrange(grid), grid)
    steps = heights(pieces - 1)
    if flat and pieces > 1:
        steps[rng.randrange(len(steps))] = steps[0]
        steps.sort()
    phi = [start] + [start + Fraction(h, grid) for h in steps]
    return Reparametrization(domain, tuple(s), tuple(phi))


def symmetric_class(rng: random.Random, n: int, k: int) -> ExtremaSequence:
    """Circle sequence with ``n`` pairs whose cyclic symmetry has order exactly ``k``."""
    if n % k:
        raise ValueError("k must divide n")
    block = n // k
    for _ in range(1000):
        base = alternating_values(rng, 2 * block, True, cyclic=True)
        seq = ExtremaSequence(DomainKind.CIRCLE, base * k)
        if len(cyclic_shifts(seq, seq)) == k:
            return seq
    raise RuntimeError("could not draw a symmetric class")  # pragma: no cover
