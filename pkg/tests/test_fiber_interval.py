import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ph_fiber.errors import BoundaryViolation, MalformedBarcode, RepeatedEndpoints, TooLarge
from ph_fiber.fiber_interval import (canonical_representative_interval, component_of_interval,
                                     contraction_path, enumerate_components_interval, reparametrization_interval,
                                     same_component_interval)
from ph_fiber.generate import random_function, random_reparametrization
from ph_fiber.persistence import Bar, Barcode, barcode, barcode_bruteforce, bottleneck_distance, minimal_resolution
from ph_fiber.pl_core import ExtremaSequence, PLFunction, compose, extrema, max_residual

F = Fraction


def lin(*vals):
    k = len(vals) - 1
    return PLFunction("interval", tuple(F(i, k) for i in range(k + 1)), vals)


def test_reparametrized_copy_is_same_component():
    rng = random.Random(1)
    for _ in range(20):
        f = random_function(rng, "interval")
        phi = random_reparametrization(rng, "interval", injective=True)
        assert same_component_interval(f, compose(f, phi))


def test_ordered_sequences_differ():
    f, g = lin(0, 1, "0.2", "0.8"), lin(0, "0.8", "0.2", 1)
    assert not same_component_interval(f, g)


def test_interval_barcodes_of_the_two_orderings():
    # the last maximum is a boundary maximum in one case only, so these barcodes differ
    f, g = lin(0, 1, "0.2", "0.8"), lin(0, "0.8", "0.2", 1)
    assert barcode(f) == barcode_bruteforce(f, 300) == Barcode.of((0, 0), (0, "0.2", 1))
    assert barcode(g) == barcode_bruteforce(g, 300) == Barcode.of((0, 0), (0, "0.2", "0.8"))


def test_monotone_functions_with_same_endpoints():
    assert same_component_interval(lin(0, 1), PLFunction("interval", (0, F(1, 3), 1), (0, F(9, 10), 1)))


def test_boundary_maxima_slide_without_prescription():
    assert same_component_interval(lin(1, 0, 1), lin(2, 0, 1))
    assert same_component_interval(lin(0, 1), lin(1, 0))


def test_prescription_fixes_the_pattern():
    assert not same_component_interval(lin(0, 1), lin(0, 2, 1), boundary=(0, 1))
    assert same_component_interval(lin(0, 1), PLFunction("interval", (0, F(1, 5), 1), (0, F(1, 2), 1)),
                                   boundary=(0, 1))
    with pytest.raises(BoundaryViolation):
        same_component_interval(lin(0, 1), lin(0, 2), boundary=(0, 1))


def test_canonical_examples():
    seq = ExtremaSequence("interval", (0, 1))
    assert canonical_representative_interval(seq) == lin(0, 1)
    seq = ExtremaSequence("interval", (0, 1, "0.2"))
    can = canonical_representative_interval(seq)
    assert can.breakpoints == (0, F(1, 2), 1) and can.values == (0, 1, F(1, 5))


@pytest.mark.parametrize("seed", range(10))
def test_canonical_shares_barcode(seed):
    rng = random.Random(seed)
    f = random_function(rng, "interval", max_n=5)
    comp = component_of_interval(f)
    can = comp.canonical
    assert barcode(can) == barcode(f)
    assert barcode_bruteforce(can, minimal_resolution(can)) == barcode(f)


def test_reparametrization_round_trip():
    rng = random.Random(3)
    for _ in range(30):
        f = random_function(rng, "interval", max_n=5)
        can = canonical_representative_interval(extrema(f)[0])
        phi = reparametrization_interval(f, can)
        assert max_residual(f, can, phi) <= 1e-12


def test_contraction_of_canonical_is_constant():
    can = lin(0, 1, "0.2")
    path = contraction_path(can, 4)
    assert all(h == can for h in path)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_contraction_stays_in_fiber(seed):
    rng = random.Random(seed)
    f = random_function(rng, "interval", max_n=5)
    path = contraction_path(f, 16)
    comp = component_of_interval(f)
    assert len(path) == 17 and path[0] == f and path[-1] == comp.canonical
    d = barcode(f)
    assert all(bottleneck_distance(d, barcode(h)) == 0 for h in path)


def test_contraction_keeps_sequence_when_no_boundary_maxima():
    f = PLFunction("interval", (0, F(1, 8), F(1, 2), F(3, 4), 1), (0, 3, 1, 2, F(1, 2)))
    for h in contraction_path(f, 16):
        assert extrema(h)[0] == extrema(f)[0]


def test_contraction_with_prescription_keeps_full_sequence():
    f = PLFunction("interval", (0, F(1, 8), F(1, 2), 1), (2, 0, 3, 1))
    for h in contraction_path(f, 8, boundary=(2, 1)):
        assert extrema(h)[0] == extrema(f)[0]
        assert h.values[0] == 2 and h.values[-1] == 1


def test_joined_contractions_give_a_path():
    rng = random.Random(5)
    f = random_function(rng, "interval", n=3)
    g = compose(f, random_reparametrization(rng, "interval"))
    a, b = contraction_path(f, 8), contraction_path(g, 8)
    assert a[-1] == b[-1]


def test_enumerate_prescribed_monotone():
    comps = enumerate_components_interval(Barcode.of((0, 0)), boundary=(0, 1))
    assert len(comps) == 1
    assert comps[0].canonical == lin(0, 1)


def test_enumerate_one_bar_by_brute_force():
    d = Barcode.of((0, 0), (0, "0.2", "0.8"))
    comps = enumerate_components_interval(d)
    assert sorted(c.sequence.values for c in comps) == [(0, F(4, 5), F(1, 5)), (F(1, 5), F(4, 5), 0)]


@pytest.mark.parametrize("boundary", [None, (0, 1), (1, "0.9")])
def test_enumerated_components_reproduce_barcode(boundary):
    d = Barcode.of((0, 0), (0, "0.2", "0.8"), (0, "0.4", "0.6"))
    comps = enumerate_components_interval(d, boundary=boundary)
    assert comps
    for c in comps:
        assert barcode(c.canonical) == d
        assert barcode_bruteforce(c.canonical, minimal_resolution(c.canonical)) == d
        if boundary is not None:
            assert c.canonical.values[0] == F(boundary[0]) and c.canonical.values[-1] == F(boundary[1])
    for a in comps:
        for b in comps:
            assert same_component_interval(a.canonical, b.canonical, boundary) == (a is b)


def test_enumerate_guards():
    with pytest.raises(MalformedBarcode):
        enumerate_components_interval(Barcode.of((0, 0), (1, 1)))
    with pytest.raises(MalformedBarcode):
        enumerate_components_interval(Barcode.of((0, 1), (0, 0, 2)))
    with pytest.raises(RepeatedEndpoints):
        enumerate_components_interval(Barcode.of((0, 0), (0, 1, 2), (0, 1, 3)))
    bars = [Bar(0, 0)] + [Bar(0, 1 + 2 * i, 2 + 2 * i) for i in range(11)]
    with pytest.raises(TooLarge):
        enumerate_components_interval(Barcode(bars))


def test_constant_component():
    c = PLFunction.constant("interval", 3)
    comp = component_of_interval(c)
    assert comp.canonical == c
    assert same_component_interval(c, lin(4, 3, 5))
    assert not same_component_interval(c, lin(3, 4, 3))
