"""Saddle counts and fiber homotopy types for Morse functions on compact surfaces.

The classification is a lookup: the number of index-1 critical points is read
off the barcode, then the surface and that count select a row of the known
tables.  Nothing here proves those tables; it only applies them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .errors import InconsistentBarcode, MalformedBarcode, NegativeCount, NotClassified, RequiresPositiveSaddles
from .persistence import Barcode, has_distinct_endpoints
from .pl_core import DomainKind

# (orientable, genus, number of boundary circles)
SHORTCUTS: Dict[str, Tuple[bool, int, int]] = {
    "sphere": (True, 0, 0),
    "projective_plane": (False, 1, 0),
    "torus": (True, 1, 0),
    "klein_bottle": (False, 2, 0),
    "annulus": (True, 0, 2),
    "disk": (True, 0, 1),
    "mobius_strip": (False, 1, 1),
}

# pi_n(S^2) = pi_n(S^3) for n >= 3
_PI_N_S2 = {3: "Z", 4: "Z/2", 5: "Z/2", 6: "Z/12", 7: "Z/2", 8: "Z/2", 9: "Z/3", 10: "Z/15"}


def _canon_name(name: str) -> str:
    key = name.strip().lower().replace("-", "_").replace(" ", "_")
    aliases = {"s2": "sphere", "rp2": "projective_plane", "projective": "projective_plane",
               "klein": "klein_bottle", "mobius": "mobius_strip", "moebius_strip": "mobius_strip",
               "cylinder": "annulus", "d2": "disk", "disc": "disk", "t2": "torus"}
    return aliases.get(key, key)


@dataclass(frozen=True)
class SurfaceSpec:
    """Compact connected surface; ``genus`` is the non-orientable genus when not orientable.

    ``boundary`` tags each boundary circle as a local ``"min"`` or ``"max"`` of
    the functions under study.  ``beta2`` overrides the top Betti number, which
    depends on the coefficient field for closed non-orientable surfaces.
    """

    orientable: bool
    genus: int = 0
    boundary: Tuple[str, ...] = ()
    beta2: Optional[int] = None

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus < 1:
            raise ValueError("non-orientable surfaces have genus >= 1")
        tags = tuple(str(t).lower() for t in self.boundary)
        if any(t not in ("min", "max") for t in tags):
            raise ValueError(f"boundary tags must be 'min' or 'max', got {tags}")
        object.__setattr__(self, "boundary", tags)

    @classmethod
    def named(cls, name: str, boundary: Optional[Sequence[str]] = None, beta2: Optional[int] = None) -> "SurfaceSpec":
        key = _canon_name(name)
        if key not in SHORTCUTS:
            raise ValueError(f"unknown surface {name!r}; known: {', '.join(SHORTCUTS)}")
        orientable, genus, nb = SHORTCUTS[key]
        tags = tuple(boundary) if boundary is not None else ("max",) * nb
        if len(tags) != nb:
            raise ValueError(f"{key} has {nb} boundary circle(s), got {len(tags)} tag(s)")
        return cls(orientable, genus, tags, beta2)

    @property
    def name(self) -> Optional[str]:
        for key, shape in SHORTCUTS.items():
            if shape == (self.orientable, self.genus, len(self.boundary)):
                return key
        return None

    @property
    def closed(self) -> bool:
        return not self.boundary

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - len(self.boundary)
        return 2 - self.genus - len(self.boundary)

    @property
    def n_min_boundary(self) -> int:
        return sum(1 for t in self.boundary if t == "min")

    def resolved_beta2(self, d: Optional[Barcode] = None) -> int:
        if self.beta2 is not None:
            return self.beta2
        if not self.closed:
            return 0
        if self.orientable:
            return 1
        # field-dependent: trust the barcode, which already reflects the field
        return len(d.infinite(2)) if d is not None else 0

    def to_json(self) -> dict:
        out = {"orientable": self.orientable, "genus": self.genus,
               "boundary": [{"tag": t} for t in self.boundary]}
        if self.beta2 is not None:
            out["beta2"] = self.beta2
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceSpec":
        if "name" in data:
            tags = [b["tag"] if isinstance(b, dict) else b for b in data.get("boundary", [])] or None
            return cls.named(data["name"], tags, data.get("beta2"))
        try:
            tags = tuple(b["tag"] if isinstance(b, dict) else b for b in data.get("boundary", []))
            return cls(bool(data["orientable"]), int(data.get("genus", 0)), tags, data.get("beta2"))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed surface JSON: {exc}") from None


@dataclass(frozen=True)
class HomotopyType:
    """Finite product of named spaces, optionally times ``(S^1)^k`` with only a bound on ``k``.

    No factors and no unknown torus means a point.
    """

    factors: Tuple[Tuple[str, int], ...] = ()
    torus_rank_bound: Optional[int] = None

    @classmethod
    def product(cls, *factors: Tuple[str, int]) -> "HomotopyType":
        return cls(tuple((name, e) for name, e in factors if e != 0))

    @classmethod
    def point(cls) -> "HomotopyType":
        return cls()

    @property
    def is_point(self) -> bool:
        return not self.factors and self.torus_rank_bound is None

    def __str__(self) -> str:
        parts = []
        for name, e in self.factors:
            parts.append(name if e == 1 else f"({name})^{e}")
        if self.torus_rank_bound is not None:
            parts.append(f"(S^1)^k_f with k_f <= {self.torus_rank_bound}")
        return " x ".join(parts) if parts else "point"

    def to_json(self) -> dict:
        return {"text": str(self), "factors": [[n, e] for n, e in self.factors],
                "torus_rank_bound": self.torus_rank_bound}

    @classmethod
    def from_json(cls, data: dict) -> "HomotopyType":
        return cls(tuple((str(n), int(e)) for n, e in data["factors"]), data.get("torus_rank_bound"))


@dataclass(frozen=True)
class FiberReport:
    homotopy_type: HomotopyType
    c1: Optional[int] = None
    pi_n: Dict[int, str] = field(default_factory=dict)
    assumptions: Dict[str, bool] = field(default_factory=dict)
    surface: Optional[str] = None
    components: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "surface": self.surface,
            "c1": self.c1,
            "homotopy_type": self.homotopy_type.to_json(),
            "pi_n": {str(k): v for k, v in sorted(self.pi_n.items())},
            "assumptions": dict(sorted(self.assumptions.items())),
            "components": self.components,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiberReport":
        return cls(HomotopyType.from_json(data["homotopy_type"]), data.get("c1"),
                   {int(k): v for k, v in data.get("pi_n", {}).items()},
                   dict(data.get("assumptions", {})), data.get("surface"), data.get("components"))


def saddle_count(d: Barcode, surface: SurfaceSpec) -> int:
    """Number of index-1 critical points: bars minus ``beta0``, ``beta2`` and minimum boundary circles."""
    check_barcode_degrees(d)
    beta0 = 1
    beta2 = surface.resolved_beta2(d)
    if len(d.infinite(0)) != beta0:
        raise InconsistentBarcode(f"expected {beta0} infinite degree-0 bar, found {len(d.infinite(0))}")
    if len(d.infinite(2)) != beta2:
        raise InconsistentBarcode(f"expected {beta2} infinite degree-2 bar(s), found {len(d.infinite(2))}")
    c1 = len(d) - beta0 - beta2 - surface.n_min_boundary
    if c1 < 0:
        raise NegativeCount(f"saddle count {c1} < 0: the barcode cannot come from a Morse function here")
    return c1


def _torus(k: int) -> HomotopyType:
    if k < 0:
        raise NotClassified(f"negative circle exponent {k}")
    return HomotopyType.product(("S^1", k))


def classify(surface: SurfaceSpec, c1: int) -> HomotopyType:
    """Table lookup of the fiber component's homotopy type from the surface and saddle count."""
    g, nb, chi = surface.genus, len(surface.boundary), surface.euler_characteristic
    if c1 < 0:
        raise NegativeCount(f"saddle count {c1} < 0")
    if c1 == 0:
        if surface.orientable and g == 0 and nb == 0:
            return HomotopyType.product(("S^2", 1))
        if surface.orientable and g == 0 and nb in (1, 2):
            return HomotopyType.point()
        raise NotClassified(f"no classification with c1 = 0 for {surface.name or surface}")
    if surface.orientable:
        if nb == 0:
            if g == 0:
                return HomotopyType.product(("SO(3)", 1), ("S^1", c1 - 1))
            if g == 1:
                return _torus(c1 + 1)
            return _torus(c1 + chi)
        if g == 0 and nb in (1, 2):
            return _torus(c1)
        if g <= 1:
            # sphere or torus with disks removed
            return _torus(c1 - 1)
        return _torus(c1 + chi)
    if nb == 0:
        if g == 1:
            return HomotopyType.product(("SO(3)", 1), ("S^1", c1 - 1))
        bound = c1 + 1 if g == 2 else c1 + chi
        if bound < 0:
            raise NotClassified(f"negative bound {bound} on the torus rank")
        return HomotopyType((), bound)
    if g == 1:
        if nb == 1:
            return _torus(c1)
        # projective plane with disks removed
        return _torus(c1 - 1)
    bound = c1 + chi
    if bound < 0:
        raise NotClassified(f"negative bound {bound} on the torus rank")
    return HomotopyType((), bound)


def homotopy_groups(surface: SurfaceSpec, c1: int, n: int) -> str:
    """``pi_n`` of the fiber component for ``n >= 2`` when ``c1 > 0``."""
    if c1 <= 0:
        raise RequiresPositiveSaddles("higher homotopy groups are tabulated only for c1 > 0")
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2:
        return "0"
    # S^2 and RP^2 share the universal cover S^2; every other compact surface is aspherical
    if surface.closed and ((surface.orientable and surface.genus == 0) or (not surface.orientable and surface.genus == 1)):
        return _PI_N_S2.get(n, f"pi_{n}(S^2)")
    return "0"


def fiber_homotopy_type(d: Barcode, surface: SurfaceSpec, max_n: int = 4) -> FiberReport:
    c1 = saddle_count(d, surface)
    distinct = has_distinct_endpoints(d)
    hom = classify(surface, c1)
    pi = {n: homotopy_groups(surface, c1, n) for n in range(2, max_n + 1)} if c1 > 0 else {}
    assumptions = {"c1_positive": c1 > 0}
    if c1 > 0:
        assumptions["distinct_endpoints"] = distinct
    return FiberReport(hom, c1, pi, assumptions, surface.name)


def circle_interval_report(domain, d: Barcode, boundary=None) -> FiberReport:
    """Per-component homotopy type for 1-D domains, with the component count attached."""
    domain = DomainKind.parse(domain)
    if domain is DomainKind.CIRCLE:
        from .fiber_circle import enumerate_components
        comps = enumerate_components(d, allow_repeated=True)
        if len(comps) == 1 and comps[0].is_constant:
            return FiberReport(HomotopyType.point(), None, {}, {"constant": True}, "circle", 1)
        return FiberReport(HomotopyType.product(("S^1", 1)), None, {}, {"constant": False}, "circle", len(comps))
    from .fiber_interval import enumerate_components_interval
    comps = enumerate_components_interval(d, boundary, allow_repeated=True)
    return FiberReport(HomotopyType.point(), None, {}, {"boundary_prescribed": boundary is not None},
                       "interval", len(comps))


def check_barcode_degrees(d: Barcode) -> None:
    if any(b.degree > 2 for b in d):
        raise MalformedBarcode("surface barcodes live in degrees 0, 1, 2")
