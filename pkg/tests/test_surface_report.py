import json

import pytest

from ph_fiber.errors import InconsistentBarcode, MalformedBarcode, NegativeCount, NotClassified, RequiresPositiveSaddles
from ph_fiber.persistence import Bar, Barcode
from ph_fiber.surface_report import (FiberReport, HomotopyType, SurfaceSpec, circle_interval_report, classify,
                                     fiber_homotopy_type, homotopy_groups, saddle_count)

S = SurfaceSpec.named

# (surface, c1) -> rendered homotopy type
GOLDEN = [
    (S("sphere"), 0, "S^2"),
    (S("annulus"), 0, "point"),
    (S("disk"), 0, "point"),
    (S("sphere"), 1, "SO(3)"),
    (S("sphere"), 2, "SO(3) x S^1"),
    (S("sphere"), 3, "SO(3) x (S^1)^2"),
    (S("projective_plane"), 1, "SO(3)"),
    (S("projective_plane"), 3, "SO(3) x (S^1)^2"),
    (S("torus"), 1, "(S^1)^2"),
    (S("torus"), 2, "(S^1)^3"),
    (S("torus"), 3, "(S^1)^4"),
    (S("annulus"), 1, "S^1"),
    (S("annulus"), 3, "(S^1)^3"),
    (S("disk"), 2, "(S^1)^2"),
    (S("disk"), 3, "(S^1)^3"),
    (S("mobius_strip"), 1, "S^1"),
    (S("mobius_strip"), 3, "(S^1)^3"),
    # disks removed from sphere, torus, projective plane
    (SurfaceSpec(True, 0, ("max",) * 3), 2, "S^1"),
    (SurfaceSpec(True, 1, ("max",)), 3, "(S^1)^2"),
    (SurfaceSpec(True, 1, ("max",) * 2), 1, "point"),
    (SurfaceSpec(False, 1, ("max",) * 2), 3, "(S^1)^2"),
    # other orientable: genus 2 has chi = -2
    (SurfaceSpec(True, 2), 3, "S^1"),
    (SurfaceSpec(True, 2), 5, "(S^1)^3"),
    (S("klein_bottle"), 3, "(S^1)^k_f with k_f <= 4"),
    (S("klein_bottle"), 1, "(S^1)^k_f with k_f <= 2"),
    # other non-orientable: genus 3 has chi = -1
    (SurfaceSpec(False, 3), 2, "(S^1)^k_f with k_f <= 1"),
    (SurfaceSpec(False, 2, ("max",)), 3, "(S^1)^k_f with k_f <= 2"),
]


@pytest.mark.parametrize("surface,c1,text", GOLDEN)
def test_classification_table(surface, c1, text):
    assert str(classify(surface, c1)) == text


@pytest.mark.parametrize("surface,c1", [
    (S("torus"), 0), (S("projective_plane"), 0), (S("klein_bottle"), 0), (S("mobius_strip"), 0),
    (SurfaceSpec(True, 2), 1), (SurfaceSpec(False, 4), 1),
])
def test_outside_every_clause(surface, c1):
    with pytest.raises(NotClassified):
        classify(surface, c1)


def test_saddle_count_sphere():
    assert saddle_count(Barcode.of((0, 0), (2, 1)), S("sphere")) == 0


def test_saddle_count_torus():
    d = Barcode.of((0, 0), (1, 1), (1, 2), (2, 3))
    assert saddle_count(d, S("torus")) == 2


def test_saddle_count_disk_with_minimum_boundary():
    d = Barcode([Bar(0, 0), Bar(1, 0, 1)])
    assert saddle_count(d, S("disk", ["min"])) == 0


def test_negative_count():
    with pytest.raises(NegativeCount):
        saddle_count(Barcode.of((0, 0)), S("annulus", ["min", "min"]))


def test_infinite_bars_must_match_betti_numbers():
    with pytest.raises(InconsistentBarcode):
        saddle_count(Barcode.of((0, 0), (0, 1)), S("sphere"))
    with pytest.raises(InconsistentBarcode):
        saddle_count(Barcode.of((0, 0)), S("sphere"))


def test_non_orientable_beta2_from_barcode_or_spec():
    d = Barcode.of((0, 0), (1, 1), (1, 2))
    assert saddle_count(d, S("klein_bottle")) == 2
    d2 = Barcode.of((0, 0), (1, 1), (1, 2), (2, 3))
    assert saddle_count(d2, S("klein_bottle", beta2=1)) == 2
    with pytest.raises(InconsistentBarcode):
        saddle_count(d2, S("klein_bottle", beta2=0))


@pytest.mark.parametrize("d,surface", [
    (Barcode.of((0, 0), (2, 1)), "sphere"),
    (Barcode.of((0, 0), (0, 1, 2), (2, 3)), "sphere"),
    (Barcode.of((0, 0), (1, 1), (1, 2), (2, 3)), "torus"),
    (Barcode([Bar(0, 0), Bar(0, 1, 2), Bar(1, 3), Bar(1, 4), Bar(1, 5, 6), Bar(2, 7)]), "torus"),
])
def test_euler_characteristic_accounting(d, surface):
    spec = S(surface)
    c1 = saddle_count(d, spec)
    c0 = len(d.degree(0))
    c2 = len(d.infinite(2)) + len(d.bounded(1))
    assert c0 - c1 + c2 == spec.euler_characteristic


def test_report_for_torus():
    rep = fiber_homotopy_type(Barcode.of((0, 0), (1, 1), (1, 2), (2, 3)), S("torus"))
    assert rep.c1 == 2
    assert str(rep.homotopy_type) == "(S^1)^3"
    assert rep.pi_n == {2: "0", 3: "0", 4: "0"}
    assert rep.assumptions == {"c1_positive": True, "distinct_endpoints": True}


def test_report_flags_repeated_endpoints():
    d = Barcode([Bar(0, 0), Bar(0, 1, 2), Bar(0, 1, 3), Bar(2, 4)])
    rep = fiber_homotopy_type(d, S("sphere"))
    assert rep.c1 == 2 and rep.assumptions["distinct_endpoints"] is False


def test_report_without_saddles_has_no_higher_groups():
    rep = fiber_homotopy_type(Barcode.of((0, 0), (2, 1)), S("sphere"))
    assert str(rep.homotopy_type) == "S^2" and rep.pi_n == {}
    assert rep.assumptions == {"c1_positive": False}


def test_homotopy_groups():
    assert homotopy_groups(S("torus"), 1, 2) == "0"
    assert homotopy_groups(S("klein_bottle"), 4, 2) == "0"
    assert homotopy_groups(S("torus"), 1, 3) == "0"
    assert homotopy_groups(S("sphere"), 1, 3) == "Z"
    assert homotopy_groups(S("projective_plane"), 2, 3) == "Z"
    assert homotopy_groups(S("sphere"), 1, 4) == "Z/2"
    assert homotopy_groups(S("sphere"), 1, 6) == "Z/12"
    assert homotopy_groups(S("sphere"), 1, 40) == "pi_40(S^2)"
    assert homotopy_groups(S("disk"), 1, 3) == "0"
    with pytest.raises(RequiresPositiveSaddles):
        homotopy_groups(S("sphere"), 0, 3)


def test_report_round_trip():
    rep = fiber_homotopy_type(Barcode.of((0, 0), (1, 1), (1, 2), (2, 3)), S("klein_bottle", beta2=1))
    text = json.dumps(rep.to_json(), sort_keys=True)
    assert FiberReport.from_json(json.loads(text)) == rep
    assert json.dumps(FiberReport.from_json(json.loads(text)).to_json(), sort_keys=True) == text


def test_surface_spec():
    assert S("torus").euler_characteristic == 0
    assert S("mobius_strip").euler_characteristic == 0
    assert S("klein_bottle").euler_characteristic == 0
    assert S("projective_plane").euler_characteristic == 1
    assert S("annulus", ["min", "max"]).n_min_boundary == 1
    spec = SurfaceSpec.from_json({"orientable": True, "genus": 1, "boundary": [{"tag": "min"}], "beta2": 0})
    assert spec == SurfaceSpec(True, 1, ("min",), 0)
    assert SurfaceSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        S("disk", ["min", "min"])
    with pytest.raises(ValueError):
        SurfaceSpec(False, 0)
    with pytest.raises(ValueError):
        S("pretzel")


def test_degree_three_rejected():
    with pytest.raises(ValueError):
        Barcode.of((3, 0))


def test_homotopy_type_text():
    assert str(HomotopyType.point()) == "point"
    assert str(HomotopyType.product(("SO(3)", 1), ("S^1", 0))) == "SO(3)"


def test_circle_and_interval_reports():
    rep = circle_interval_report("circle", Barcode.of((0, 0), (0, "0.2", "0.8"), (1, 1)))
    assert str(rep.homotopy_type) == "S^1" and rep.components == 2
    rep = circle_interval_report("circle", Barcode.of((0, 1), (1, 1)))
    assert rep.homotopy_type.is_point and rep.components == 1
    rep = circle_interval_report("interval", Barcode.of((0, 0), (0, "0.2", "0.8")))
    assert rep.homotopy_type.is_point and rep.components == 2
    with pytest.raises(MalformedBarcode):
        circle_interval_report("circle", Barcode.of((0, 0)))
