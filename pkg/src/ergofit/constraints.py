"""Mapping from avatar body measurements to geometric shape constraints.

Each constraint binds one component tag to a target value with a sliding
band; constraints are grouped by dimensional kind (heights, widths,
lengths, angles) and processed group by group during deformation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .avatar import Avatar, eye_height, measure
from .config import ConstraintConfig
from .geometry import Cylinder, Proxy
from .shape import Component, Shape

KINDS = ("seat_height", "seat_width", "seat_length", "arm_height", "back_angle", "back_length")
GROUP_OF_KIND = {
    "seat_height": "heights",
    "arm_height": "heights",
    "seat_width": "widths",
    "seat_length": "lengths",
    "back_length": "lengths",
    "back_angle": "angles",
}

LATERAL = np.array([1.0, 0.0, 0.0])
UP = np.array([0.0, 1.0, 0.0])
FRONT = np.array([0.0, 0.0, 1.0])


class UnsupportedShapeError(ValueError):
    """The shape lacks the tags a constraint mapping requires."""


@dataclass(frozen=True)
class ErgonomicConstraint:
    kind: str
    target_tag: str
    target_value: float   # meters, or degrees for back_angle
    band: tuple[float, float]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind '{self.kind}'")
        lo, hi = self.band
        if not (lo <= self.target_value <= hi):
            raise ValueError(f"{self.kind}: target {self.target_value} outside band [{lo}, {hi}]")
        width = (hi - lo) / abs(self.target_value)
        if not (0.05 - 1e-9 <= width <= 0.30 + 1e-9):
            raise ValueError(f"{self.kind}: band width {width:.3f} outside the sliding range")

    @property
    def group(self) -> str:
        return GROUP_OF_KIND[self.kind]

    def contains(self, value: float) -> bool:
        return self.band[0] <= value <= self.band[1]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "target_tag": self.target_tag,
                "target_value": self.target_value, "band": list(self.band)}


@dataclass(frozen=True)
class ConstraintGroup:
    name: str
    constraints: tuple[ErgonomicConstraint, ...]

    def __post_init__(self):
        if self.name not in ("heights", "widths", "lengths", "angles"):
            raise ValueError(f"unknown group name '{self.name}'")
        for c in self.constraints:
            if c.group != self.name:
                raise ValueError(f"constraint {c.kind} does not belong to group {self.name}")


def _banded(kind: str, tag: str, target: float, rel: float) -> ErgonomicConstraint:
    return ErgonomicConstraint(kind, tag, target, (target * (1 - rel), target * (1 + rel)))


def derive_constraints(avatar: Avatar, shape: Shape,
                       config: ConstraintConfig = ConstraintConfig()) -> list[ConstraintGroup]:
    """Constraint groups for this avatar pose, gated by the shape's tags.

    Groups come out in config.group_order (default heights, widths, lengths,
    angles); within a group, constraints whose target tag carries more
    constraints overall come first.
    """
    tags = shape.tags
    if "seat" not in tags:
        raise UnsupportedShapeError(f"shape '{shape.id}' has no seat-tagged component")
    m = measure(avatar)

    constraints = [
        _banded("seat_height", "seat", m.hip_height, config.seat_height_band),
        _banded("seat_length", "seat", m.upper_leg_length, config.seat_length_band),
    ]
    mult = config.bench_occupants if avatar.pose.name == "bench_sitting" else 1
    w_lo = config.seat_width_lo * m.hip_width * mult
    w_hi = config.seat_width_hi * m.hip_width * mult
    constraints.append(ErgonomicConstraint("seat_width", "seat", 0.5 * (w_lo + w_hi), (w_lo, w_hi)))
    if "arm" in tags:
        constraints.append(_banded("arm_height", "arm", m.lower_arm_height, config.arm_height_band))
    if "back" in tags:
        constraints.append(_banded("back_angle", "back", m.spine_leg_angle, config.back_angle_band))
        constraints.append(_banded("back_length", "back", m.support_span, config.back_length_band))

    per_tag = {}
    for c in constraints:
        per_tag[c.target_tag] = per_tag.get(c.target_tag, 0) + 1
    groups = []
    for name in config.group_order:
        members = sorted((c for c in constraints if c.group == name),
                         key=lambda c: (-per_tag[c.target_tag], c.kind))
        if members:
            groups.append(ConstraintGroup(name, tuple(members)))
    return groups


def derive_category_constraints(category: str, avatar: Avatar, shape: Shape,
                                config: ConstraintConfig = ConstraintConfig()) -> list[ConstraintGroup]:
    """Per-category mapping used in co-retrieval.

    chair   -> the full chair mapping
    table   -> work surface top at lower-arm height
    monitor -> screen top at eye height above the work surface
    """
    if category == "chair":
        return derive_constraints(avatar, shape, config)
    m = measure(avatar)
    if category == "table":
        if "seat" not in shape.tags:
            raise UnsupportedShapeError(f"table shape '{shape.id}' lacks a top surface component")
        c = _banded("seat_height", "seat", m.lower_arm_height, config.arm_height_band)
        return [ConstraintGroup("heights", (c,))]
    if category == "monitor":
        if "back" not in shape.tags:
            raise UnsupportedShapeError(f"monitor shape '{shape.id}' lacks a screen component")
        target = eye_height(avatar) - m.lower_arm_height  # local: monitor stands on the table
        c = _banded("seat_height", "back", target, config.arm_height_band)
        return [ConstraintGroup("heights", (c,))]
    raise UnsupportedShapeError(f"unknown co-retrieval category '{category}'")


# ---------------------------------------------------------------------------
# Measuring realized quantities on shapes
# ---------------------------------------------------------------------------


def back_up_axis(proxy: Proxy) -> tuple[np.ndarray, float]:
    """Up-slope axis of a back slab and its full extent along it.

    For cuboids this is whichever of the two major axes climbs most
    steeply (the minor axis is the slab thickness); oriented to +y.
    """
    if isinstance(proxy, Cylinder):
        axis = proxy.axis if proxy.axis[1] >= 0 else -proxy.axis
        return axis, 2.0 * proxy.half_length
    a0, a1 = proxy.axes[0], proxy.axes[1]
    idx = 0 if abs(a0[1]) >= abs(a1[1]) else 1
    axis = proxy.axes[idx]
    if axis[1] < 0:
        axis = -axis
    return axis, 2.0 * float(proxy.half_extents[idx])


def _union_extent(comps: list[Component], direction: np.ndarray) -> float:
    lo, hi = np.inf, -np.inf
    for c in comps:
        mid = float(np.dot(c.proxy.center, direction))
        half = 0.5 * c.proxy.support_extent(direction)
        lo = min(lo, mid - half)
        hi = max(hi, mid + half)
    return hi - lo


def measure_constraint(c: ErgonomicConstraint, shape: Shape) -> float:
    """The shape's realized value for a constraint, from its proxies."""
    comps = shape.components_tagged(c.target_tag)
    if not comps:
        raise UnsupportedShapeError(f"shape '{shape.id}' has no '{c.target_tag}' component")
    if c.kind in ("seat_height", "arm_height"):
        return max(comp.proxy.top_height() for comp in comps)
    if c.kind == "seat_width":
        return _union_extent(comps, LATERAL)
    if c.kind == "seat_length":
        return _union_extent(comps, FRONT)
    if c.kind == "back_length":
        return max(back_up_axis(comp.proxy)[1] for comp in comps)
    if c.kind == "back_angle":
        axis, _ = back_up_axis(comps[0].proxy)
        return float(np.degrees(np.arccos(np.clip(np.dot(axis, FRONT), -1.0, 1.0))))
    raise ValueError(c.kind)


@dataclass(frozen=True)
class ConstraintCheck:
    satisfied: bool
    measured: float
    violation: float


def check_constraint(c: ErgonomicConstraint, shape: Shape) -> ConstraintCheck:
    measured = measure_constraint(c, shape)
    lo, hi = c.band
    if lo <= measured <= hi:
        return ConstraintCheck(True, measured, 0.0)
    violation = (lo - measured) if measured < lo else (measured - hi)
    return ConstraintCheck(False, measured, violation)


def groups_to_dict(groups: list[ConstraintGroup]) -> list[dict]:
    return [{"name": g.name, "constraints": [c.to_dict() for c in g.constraints]}
            for g in groups]
