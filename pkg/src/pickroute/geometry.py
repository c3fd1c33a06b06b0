"""Warehouse layouts, pick instances and the integer length model.

All lengths are converted to integer multiples of a base unit so that every
solver (and the oracle) compares optimal tour lengths exactly.  The unit is
``1 / LengthScale.denominator`` of the user-facing length unit and is chosen
so that half a slot, the aisle spacing and half the middle cross-aisle width
are all integral.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

FRONT, MIDDLE, BACK = "front", "middle", "back"
LOWER, UPPER = "lower", "upper"


class InstanceError(ValueError):
    """Raised for malformed layouts, picks or instance documents.

    ``path`` names the offending field (e.g. ``picks[3].slot``).
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # str() avoids binary artefacts such as 0.1 -> 3602879701896397/2**55
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class WarehouseLayout:
    blocks: int
    aisles: int
    slots_per_subaisle: int
    slot_length: Fraction = Fraction(1)
    aisle_spacing: Fraction = Fraction(1)
    cross_aisle_width: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("slot_length", "aisle_spacing", "cross_aisle_width"):
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if self.blocks not in (1, 2):
            raise InstanceError("layout.blocks", f"must be 1 or 2, got {self.blocks}")
        if self.aisles < 1:
            raise InstanceError("layout.aisles", "must be >= 1")
        if self.slots_per_subaisle < 1:
            raise InstanceError("layout.slots_per_subaisle", "must be >= 1")
        if self.slot_length <= 0:
            raise InstanceError("layout.slot_length", "must be > 0")
        if self.aisle_spacing <= 0:
            raise InstanceError("layout.aisle_spacing", "must be > 0")
        if self.cross_aisle_width < 0:
            raise InstanceError("layout.cross_aisle_width", "must be >= 0")
        if self.blocks == 1 and self.cross_aisle_width != 0:
            # ignored for single-block layouts
            object.__setattr__(self, "cross_aisle_width", Fraction(0))

    @property
    def subaisle_length(self) -> Fraction:
        return self.slots_per_subaisle * self.slot_length

    @property
    def aisle_height(self) -> Fraction:
        if self.blocks == 1:
            return self.subaisle_length
        return 2 * self.subaisle_length + self.cross_aisle_width

    @property
    def cross_aisles(self) -> tuple[str, ...]:
        return (FRONT, BACK) if self.blocks == 1 else (FRONT, MIDDLE, BACK)

    def scale(self) -> "LengthScale":
        return LengthScale.for_layout(self)

    def scaled(self, factor) -> "WarehouseLayout":
        f = _exact(factor)
        return WarehouseLayout(self.blocks, self.aisles, self.slots_per_subaisle,
                               self.slot_length * f, self.aisle_spacing * f,
                               self.cross_aisle_width * f)


@dataclass(frozen=True)
class LengthScale:
    """Integer unit system for one layout.

    ``half_slot``, ``spacing`` and ``half_cross`` are integers; a length of
    ``n`` units equals ``n / denominator`` in layout units.
    """

    denominator: int
    half_slot: int
    spacing: int
    half_cross: int
    slots: int
    blocks: int

    @classmethod
    def for_layout(cls, layout: WarehouseLayout) -> "LengthScale":
        parts = (layout.slot_length / 2, layout.aisle_spacing, layout.cross_aisle_width / 2)
        den = 1
        for p in parts:
            den = den * p.denominator // math.gcd(den, p.denominator)
        hs, sp, hc = (int(p * den) for p in parts)
        return cls(den, hs, sp, hc, layout.slots_per_subaisle, layout.blocks)

    @property
    def subaisle(self) -> int:
        """Vertical length between the two cross-aisle vertices bounding a subaisle."""
        return 2 * self.slots * self.half_slot + self.half_cross

    def slot_position(self, slot: int, block: Optional[str] = None) -> int:
        """Distance of a slot centre from the subaisle's front vertex."""
        pos = (2 * slot - 1) * self.half_slot
        if block == UPPER:
            pos += self.half_cross
        return pos

    def to_length(self, units: int) -> Fraction:
        return Fraction(units, self.denominator)


@dataclass(frozen=True, order=True)
class Pick:
    aisle: int
    slot: int
    block: Optional[str] = None

    def label(self) -> str:
        if self.block is None:
            return f"p[{self.aisle},{self.slot}]"
        return f"p[{self.aisle},{self.block},{self.slot}]"


@dataclass(frozen=True)
class Depot:
    aisle: int
    cross: str = FRONT


@dataclass(frozen=True)
class PickInstance:
    layout: WarehouseLayout
    depot: Depot
    picks: tuple[Pick, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "picks", tuple(sorted(self.picks)))

    @property
    def blocks(self) -> int:
        return self.layout.blocks

    def mirrored(self) -> "PickInstance":
        """Left-right reflection of the warehouse (aisle j -> m + 1 - j)."""
        m = self.layout.aisles
        return PickInstance(self.layout, Depot(m + 1 - self.depot.aisle, self.depot.cross),
                            tuple(Pick(m + 1 - p.aisle, p.slot, p.block) for p in self.picks))

    def scaled(self, factor) -> "PickInstance":
        return PickInstance(self.layout.scaled(factor), self.depot, self.picks)

    def with_picks(self, picks: Iterable[Pick]) -> "PickInstance":
        return PickInstance(self.layout, self.depot, tuple(picks))


def validate_instance(inst: PickInstance) -> None:
    """Raise :class:`InstanceError` unless ``inst`` is well formed."""
    lay = inst.layout
    if not 1 <= inst.depot.aisle <= lay.aisles:
        raise InstanceError("depot.aisle", f"out of range [1, {lay.aisles}]")
    if inst.depot.cross not in lay.cross_aisles:
        if inst.depot.cross == MIDDLE:
            raise InstanceError("depot.cross", "middle depot requires a two-block layout")
        raise InstanceError("depot.cross", f"unknown cross-aisle {inst.depot.cross!r}")
    seen = set()
    for i, p in enumerate(inst.picks):
        where = f"picks[{i}]"
        if not 1 <= p.aisle <= lay.aisles:
            raise InstanceError(f"{where}.aisle", f"out of range [1, {lay.aisles}]")
        if not 1 <= p.slot <= lay.slots_per_subaisle:
            raise InstanceError(f"{where}.slot", f"out of range [1, {lay.slots_per_subaisle}]")
        if lay.blocks == 1 and p.block is not None:
            raise InstanceError(f"{where}.block", "block tag given for a single-block layout")
        if lay.blocks == 2 and p.block is None:
            raise InstanceError(f"{where}.block", "missing block tag for a two-block layout")
        if lay.blocks == 2 and p.block not in (LOWER, UPPER):
            raise InstanceError(f"{where}.block", f"must be 'lower' or 'upper', got {p.block!r}")
        key = (p.aisle, p.block, p.slot)
        if key in seen:
            raise InstanceError(where, f"duplicate pick {key}")
        seen.add(key)


# --------------------------------------------------------------------------
# Normalised form used by the DP solvers


@dataclass(frozen=True)
class Subaisle:
    """Sorted pick positions (integer units from the front vertex) in one subaisle.

    ``labels`` carries the vertex name of every position; the depot anchor
    reuses the name of the cross-aisle vertex it sits on.
    """

    length: int
    positions: tuple[int, ...] = ()
    labels: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.positions


@dataclass(frozen=True)
class NormalizedInstance:
    """Anchored (and, for single-block, compressed) instance ready for a DP sweep.

    ``aisles`` holds original aisle numbers; ``subaisles[k]`` is ``(lower, upper)``
    for two-block layouts and ``(single,)`` otherwise; ``spans[k]`` counts the
    original aisle gaps between aisle ``k - 1`` and aisle ``k`` (``spans[0]`` is 1).
    """

    source: PickInstance
    scale: LengthScale
    aisles: tuple[int, ...]
    subaisles: tuple[tuple[Subaisle, ...], ...]
    spans: tuple[int, ...]
    depot_vertex: str

    @property
    def blocks(self) -> int:
        return self.source.blocks

    def nonempty(self) -> list[bool]:
        return [any(not s.empty for s in subs) for subs in self.subaisles]


def vertex_name(kind: str, aisle: int) -> str:
    return f"{kind}{aisle}"


def depot_vertex(inst: PickInstance) -> str:
    d = inst.depot
    if inst.blocks == 1:
        return vertex_name("b" if d.cross == FRONT else "a", d.aisle)
    return vertex_name({FRONT: "c", MIDDLE: "b", BACK: "a"}[d.cross], d.aisle)


def anchor_depot(inst: PickInstance) -> NormalizedInstance:
    """Represent the depot as a zero-cost required point inside its aisle.

    Front depot: position 0 of the front-adjacent subaisle.  Back depot: the
    far end (the back vertex) of the back-adjacent subaisle.  Middle depot:
    the back end of the lower subaisle.  No aisle is removed.
    """
    validate_instance(inst)
    sc = inst.layout.scale()
    m = inst.layout.aisles
    h = sc.subaisle
    per: dict[tuple[int, Optional[str]], list[tuple[int, str]]] = {}
    for p in inst.picks:
        per.setdefault((p.aisle, p.block), []).append((sc.slot_position(p.slot, p.block), p.label()))
    dv = depot_vertex(inst)
    d = inst.depot
    if inst.blocks == 1:
        key, pos = (d.aisle, None), (0 if d.cross == FRONT else h)
    else:
        key = (d.aisle, UPPER if d.cross == BACK else LOWER)
        pos = 0 if d.cross == FRONT else h
    pts = per.setdefault(key, [])
    if all(p != pos for p, _ in pts):
        pts.append((pos, dv))

    def make(j, block):
        pts = sorted(per.get((j, block), []))
        return Subaisle(h, tuple(p for p, _ in pts), tuple(lab for _, lab in pts))

    blocks = (None,) if inst.blocks == 1 else (LOWER, UPPER)
    subs = tuple(tuple(make(j, b) for b in blocks) for j in range(1, m + 1))
    return NormalizedInstance(inst, sc, tuple(range(1, m + 1)), subs, (1,) * m, dv)


def compress_empty_aisles(norm: NormalizedInstance) -> NormalizedInstance:
    """Drop empty aisles of an anchored single-block instance.

    ``spans[k]`` becomes the number of original aisle gaps crossed when moving
    from the previous kept aisle to kept aisle ``k`` (``spans[0]`` is 1).
    """
    if norm.blocks != 1:
        raise ValueError("empty-aisle compression applies to single-block layouts only")
    keep = [k for k, ne in enumerate(norm.nonempty()) if ne]
    if not keep:
        raise ValueError("no non-empty aisle after anchoring")
    aisles = tuple(norm.aisles[k] for k in keep)
    spans = (1,) + tuple(b - a for a, b in zip(aisles, aisles[1:]))
    return NormalizedInstance(norm.source, norm.scale, aisles,
                              tuple(norm.subaisles[k] for k in keep), spans, norm.depot_vertex)


# --------------------------------------------------------------------------
# JSON instance documents

_LAYOUT_FIELDS = {"blocks", "aisles", "slots_per_subaisle", "slot_length", "aisle_spacing",
                  "cross_aisle_width"}
_DEPOT_FIELDS = {"aisle", "cross"}
_PICK_FIELDS = {"aisle", "block", "slot"}


def _check_fields(obj: Any, allowed: set, required: set, path: str) -> None:
    if not isinstance(obj, dict):
        raise InstanceError(path, "expected an object")
    for k in obj:
        if k not in allowed:
            raise InstanceError(f"{path}.{k}" if path else k, "unknown field")
    for k in required:
        if k not in obj:
            raise InstanceError(f"{path}.{k}" if path else k, "missing field")


def _int(v: Any, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceError(path, f"expected an integer, got {v!r}")
    return v


def _num(v: Any, path: str) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InstanceError(path, f"expected a number, got {v!r}")
    try:
        return _exact(Fraction(v) if isinstance(v, str) else v)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(path, f"expected a number, got {v!r}") from None


def instance_from_dict(doc: Any) -> PickInstance:
    _check_fields(doc, {"layout", "depot", "picks"}, {"layout", "depot", "picks"}, "")
    lay = doc["layout"]
    _check_fields(lay, _LAYOUT_FIELDS, {"blocks", "aisles", "slots_per_subaisle"}, "layout")
    layout = WarehouseLayout(
        blocks=_int(lay["blocks"], "layout.blocks"),
        aisles=_int(lay["aisles"], "layout.aisles"),
        slots_per_subaisle=_int(lay["slots_per_subaisle"], "layout.slots_per_subaisle"),
        slot_length=_num(lay.get("slot_length", 1), "layout.slot_length"),
        aisle_spacing=_num(lay.get("aisle_spacing", 1), "layout.aisle_spacing"),
        cross_aisle_width=_num(lay.get("cross_aisle_width", 0), "layout.cross_aisle_width"),
    )
    dep = doc["depot"]
    _check_fields(dep, _DEPOT_FIELDS, {"aisle", "cross"}, "depot")
    if not isinstance(dep["cross"], str):
        raise InstanceError("depot.cross", "expected a string")
    depot = Depot(_int(dep["aisle"], "depot.aisle"), dep["cross"])
    if not isinstance(doc["picks"], list):
        raise InstanceError("picks", "expected a list")
    picks = []
    for i, p in enumerate(doc["picks"]):
        _check_fields(p, _PICK_FIELDS, {"aisle", "slot"}, f"picks[{i}]")
        block = p.get("block")
        if block is not None and not isinstance(block, str):
            raise InstanceError(f"picks[{i}].block", "expected a string")
        picks.append(Pick(_int(p["aisle"], f"picks[{i}].aisle"), _int(p["slot"], f"picks[{i}].slot"), block))
    # validate before sorting so diagnostics point at the document's indices
    raw = PickInstance.__new__(PickInstance)
    object.__setattr__(raw, "layout", layout)
    object.__setattr__(raw, "depot", depot)
    object.__setattr__(raw, "picks", tuple(picks))
    validate_instance(raw)
    return PickInstance(layout, depot, tuple(picks))


def _jsonable(x: Fraction):
    return int(x) if x.denominator == 1 else float(x)


def instance_to_dict(inst: PickInstance) -> dict:
    lay = inst.layout
    layout = {
        "blocks": lay.blocks,
        "aisles": lay.aisles,
        "slots_per_subaisle": lay.slots_per_subaisle,
        "slot_length": _jsonable(lay.slot_length),
        "aisle_spacing": _jsonable(lay.aisle_spacing),
        "cross_aisle_width": _jsonable(lay.cross_aisle_width),
    }
    picks = []
    for p in inst.picks:
        d = {"aisle": p.aisle, "slot": p.slot}
        if p.block is not None:
            d["block"] = p.block
        picks.append(d)
    return {"layout": layout, "depot": {"aisle": inst.depot.aisle, "cross": inst.depot.cross},
            "picks": picks}


def load_instance(path) -> PickInstance:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError("$", f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return instance_from_dict(doc)


def dump_instance(inst: PickInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")
