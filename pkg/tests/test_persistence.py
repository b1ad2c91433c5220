import itertools
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ph_fiber.errors import ResolutionTooLow
from ph_fiber.generate import random_function, random_reparametrization
from ph_fiber.numeric import INF, loads, tolerance
from ph_fiber.persistence import (Bar, Barcode, barcode, barcode_bruteforce, bottleneck_distance,
                                  has_distinct_endpoints, minimal_resolution, same_barcode)
from ph_fiber.pl_core import PLFunction, compose, extrema

F = Fraction


def exhaustive_bottleneck(xs, ys):
    """Min over all perfect matchings with diagonal slots; fine for a handful of bars."""
    xs, ys = list(xs), list(ys)
    n = len(xs) + len(ys)
    left = xs + [None] * len(ys)
    right = ys + [None] * len(xs)

    def cost(a, b):
        if a is None and b is None:
            return 0
        if a is None or b is None:
            bar = a or b
            return math.inf if bar.infinite else (bar.death - bar.birth) / 2
        if a.degree != b.degree or a.infinite != b.infinite:
            return math.inf
        if a.infinite:
            return abs(a.birth - b.birth)
        return max(abs(a.birth - b.birth), abs(a.death - b.death))

    best = math.inf
    for perm in itertools.permutations(range(n)):
        best = min(best, max((cost(left[i], right[perm[i]]) for i in range(n)), default=0))
    return best


def test_constant_circle_is_trivial():
    d = barcode(PLFunction.constant("circle", 2))
    assert d == Barcode.of((0, 2), (1, 2))
    assert barcode_bruteforce(PLFunction.constant("circle", 2), 10) == d


def test_circle_example():
    f = PLFunction("circle", (0, F(1, 4), F(1, 2), F(3, 4)), (0, 1, F(1, 5), F(4, 5)))
    expected = Barcode.of((0, 0), (0, "0.2", "0.8"), (1, 1))
    assert barcode(f) == expected
    assert barcode_bruteforce(f, 10**4) == expected


def test_monotone_interval():
    f = PLFunction("interval", (0, 1), (0, 1))
    assert barcode(f) == Barcode.of((0, 0))
    assert barcode(f).degree(1) == []


def test_interval_boundary_maximum_leaves_no_bar():
    f = PLFunction("interval", (0, F(1, 2), 1), (3, 0, 1))
    assert barcode(f) == Barcode.of((0, 0))


def test_bruteforce_resolution_guard():
    f = PLFunction("circle", (0, F(1, 4), F(1, 2), F(3, 4)), (0, 1, 0, 1))
    with pytest.raises(ResolutionTooLow):
        barcode_bruteforce(f, 39)
    with pytest.raises(ResolutionTooLow):
        barcode_bruteforce(f, 42)  # 1/4 falls between samples
    assert barcode_bruteforce(f, 40) == barcode(f)


def test_minimal_resolution():
    f = PLFunction("interval", (0, F(1, 3), F(3, 4), 1), (0, 1, 0, 1))
    r = minimal_resolution(f)
    assert r % 12 == 0 and r >= 40
    with pytest.raises(ResolutionTooLow):
        minimal_resolution(PLFunction("interval", (0.0, 0.3, 1.0), (0.0, 1.0, 0.0)))


@pytest.mark.parametrize("dom", ["circle", "interval"])
def test_oracle_equivalence_sweep(dom):
    rng = random.Random(17)
    for _ in range(100):
        f = random_function(rng, dom, max_n=6, distinct=rng.random() < 0.7)
        assert barcode(f) == barcode_bruteforce(f, minimal_resolution(f))


def test_circle_shape_and_endpoint_accounting():
    rng = random.Random(3)
    for _ in range(100):
        f = random_function(rng, "circle", max_n=6)
        d = barcode(f)
        seq, _ = extrema(f)
        assert len(d.infinite(0)) == 1 and len(d.infinite(1)) == 1
        assert len(d.bounded(0)) == seq.n - 1
        b0, b1 = d.infinite(0)[0].birth, d.infinite(1)[0].birth
        assert b0 < b1
        ends = sorted([b.birth for b in d.degree(0)] + [b1] + [b.death for b in d.bounded(0)])
        assert ends == sorted(seq.values)


def test_plateau_ties_give_same_multiset():
    # two minima at the same height: either may die
    f = PLFunction("circle", (0, F(1, 4), F(1, 2), F(3, 4)), (0, 2, 0, 1))
    assert barcode(f) == Barcode.of((0, 0), (0, 0, 1), (1, 2))
    assert barcode_bruteforce(f, 400) == barcode(f)


def test_bottleneck_examples():
    d = Barcode.of((0, 0), (0, "0.2", "0.8"), (1, 1))
    assert bottleneck_distance(d, d) == 0
    assert bottleneck_distance(Barcode.of((0, 0)), Barcode.of((0, 1))) == 1
    base = Barcode.of((0, 0), (1, 1))
    assert bottleneck_distance(d, base) == F(3, 10)
    assert exhaustive_bottleneck(d.degree(0), base.degree(0)) == F(3, 10)


def test_bottleneck_infinite_count_mismatch():
    assert bottleneck_distance(Barcode.of((0, 0)), Barcode.of((0, 0), (0, 1))) == INF
    assert bottleneck_distance(Barcode.of((0, 0)), Barcode.of((1, 0))) == INF


def random_barcode(rng, bars=4):
    out = [Bar(0, F(rng.randint(0, 4), 4))]
    for _ in range(rng.randint(0, bars)):
        b = F(rng.randint(0, 20), 10)
        out.append(Bar(0, b, b + F(rng.randint(1, 15), 10)))
    return Barcode(out)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_bottleneck_matches_exhaustive_oracle(seed):
    rng = random.Random(seed)
    a, b = random_barcode(rng, 3), random_barcode(rng, 3)
    assert bottleneck_distance(a, b) == exhaustive_bottleneck(a.bars, b.bars)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_bottleneck_is_pseudometric(seed):
    rng = random.Random(seed)
    a, b, c = (random_barcode(rng) for _ in range(3))
    assert bottleneck_distance(a, b) == bottleneck_distance(b, a)
    assert bottleneck_distance(a, c) <= bottleneck_distance(a, b) + bottleneck_distance(b, c) + 1e-12


def test_stability_spot_check():
    rng = random.Random(8)
    grid = [F(i, 12) for i in range(12)]
    for _ in range(50):
        f = PLFunction("circle", tuple(grid), tuple(F(rng.randint(0, 40), 10) for _ in grid))
        g = PLFunction("circle", tuple(grid), tuple(v + F(rng.randint(-5, 5), 10) for v in f.values))
        sup = max(abs(a - b) for a, b in zip(f.values, g.values))
        assert bottleneck_distance(barcode(f), barcode(g)) <= sup


def test_reparametrization_invariance_including_flat_maps():
    rng = random.Random(12)
    for dom in ("circle", "interval"):
        for _ in range(50):
            f = random_function(rng, dom, max_n=5)
            phi = random_reparametrization(rng, dom, pieces=rng.randint(1, 6))
            assert bottleneck_distance(barcode(f), barcode(compose(f, phi))) == 0


def test_same_barcode_semantics():
    a = Barcode([Bar(0, 0), Bar(0, F(1, 5), F(4, 5)), Bar(1, 1)])
    b = Barcode([Bar(1, 1), Bar(0, F(1, 5), F(4, 5)), Bar(0, 0)])
    assert same_barcode(a, b)
    close = Barcode([Bar(0, 1e-12)])
    with tolerance(1e-9):
        assert same_barcode(Barcode([Bar(0, 0.0)]), close)
    assert not same_barcode(Barcode.of((0, 0)), Barcode.of((1, 0)))


def test_bar_validation():
    with pytest.raises(ValueError):
        Bar(0, 1, 1)
    with pytest.raises(ValueError):
        Bar(3, 0)


def test_json_round_trip():
    d = Barcode.of((0, 0), (0, F(1, 3), "0.8"), (1, 1))
    assert Barcode.from_json(loads(json.dumps(d.to_json()))) == d
    assert d.to_json()["bars"][1]["birth"] == "1/3"
    assert Barcode.from_json({"bars": [{"degree": 1, "birth": 1, "death": "inf"}]}) == Barcode.of((1, 1))


def test_distinct_endpoints():
    assert has_distinct_endpoints(Barcode.of((0, 0), (0, 1, 2), (0, 3, 4)))
    assert not has_distinct_endpoints(Barcode.of((0, 0), (0, 1, 2), (0, 2, 4)))
