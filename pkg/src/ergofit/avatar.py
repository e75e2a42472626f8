"""Posable human avatar: skeleton tree, bone ellipsoids, presets, measurements.

The skeleton has 20 joints and 19 bones rooted at the chest. Each bone
carries length/width/thickness attributes defining its ellipsoid
(semi-axes length/2, width/2, thickness/2). Preset poses ship as data
files holding per-bone unit directions; joint positions derive from them
by walking the tree, so bone lengths hold exactly for any attribute set.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

BONE_LENGTH_TOL = 1e-6

JOINTS = (
    "chest", "neck", "head", "head-top", "spine-mid", "hip-center",
    "shoulder-l", "shoulder-r", "elbow-l", "elbow-r", "wrist-l", "wrist-r",
    "hip-l", "hip-r", "knee-l", "knee-r", "ankle-l", "ankle-r", "toe-l", "toe-r",
)

# (parent, child, tag), parents precede children
BONES = (
    ("chest", "neck", "neck-bone"),
    ("neck", "head", "head-bone"),
    ("head", "head-top", "skull-bone"),
    ("chest", "spine-mid", "chest-bone"),
    ("spine-mid", "hip-center", "body-bone"),
    ("chest", "shoulder-l", "shoulder-l"),
    ("chest", "shoulder-r", "shoulder-r"),
    ("shoulder-l", "elbow-l", "upper-arm-l"),
    ("shoulder-r", "elbow-r", "upper-arm-r"),
    ("elbow-l", "wrist-l", "lower-arm-l"),
    ("elbow-r", "wrist-r", "lower-arm-r"),
    ("hip-center", "hip-l", "hip-l"),
    ("hip-center", "hip-r", "hip-r"),
    ("hip-l", "knee-l", "upper-leg-l"),
    ("hip-r", "knee-r", "upper-leg-r"),
    ("knee-l", "ankle-l", "lower-leg-l"),
    ("knee-r", "ankle-r", "lower-leg-r"),
    ("ankle-l", "toe-l", "foot-l"),
    ("ankle-r", "toe-r", "foot-r"),
)

ROOT = "chest"
POSE_NAMES = ("normal_sitting", "bench_sitting", "beach_lying", "bar_sitting")
FOOT_JOINTS = ("ankle-l", "ankle-r", "toe-l", "toe-r")

_PARENT = {child: parent for parent, child, _ in BONES}
_BONE_BY_CHILD = {child: (parent, child, tag) for parent, child, tag in BONES}
_BONE_BY_TAG = {tag: (parent, child) for parent, child, tag in BONES}
_CHILDREN: dict[str, list[str]] = {j: [] for j in JOINTS}
for _p, _c, _t in BONES:
    _CHILDREN[_p].append(_c)


class AvatarValidationError(ValueError):
    """An avatar document or edit violates a skeleton invariant."""


@dataclass(frozen=True)
class BoneAttributes:
    length: float
    width: float
    thickness: float

    def __post_init__(self):
        for name in ("length", "width", "thickness"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and np.isfinite(v) and v > 0):
                raise AvatarValidationError(f"bone {name} must be a positive number, got {v!r}")


@dataclass(frozen=True, eq=False)
class Pose:
    name: str
    joint_positions: dict[str, np.ndarray]

    def position(self, joint: str) -> np.ndarray:
        return self.joint_positions[joint]


@dataclass(frozen=True)
class Camera:
    """Viewpoint used to map screen drags into world space."""

    position: tuple[float, float, float] = (0.0, 1.2, 3.0)
    target: tuple[float, float, float] = (0.0, 0.6, 0.0)
    up: tuple[float, float, float] = (0.0, 1.0, 0.0)

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        forward = np.asarray(self.target, float) - np.asarray(self.position, float)
        forward /= np.linalg.norm(forward)
        right = np.cross(forward, np.asarray(self.up, float))
        right /= np.linalg.norm(right)
        true_up = np.cross(right, forward)
        return right, true_up, forward


def _load_data(name: str) -> dict:
    with resources.files("ergofit.data").joinpath(name).open() as fh:
        return json.load(fh)


_DEFAULT_ATTRS: dict[str, BoneAttributes] | None = None
_PRESETS: dict | None = None


def default_attributes() -> dict[str, BoneAttributes]:
    global _DEFAULT_ATTRS
    if _DEFAULT_ATTRS is None:
        raw = _load_data("avatar_default.json")
        _DEFAULT_ATTRS = {tag: BoneAttributes(**vals) for tag, vals in raw.items()}
    return dict(_DEFAULT_ATTRS)


def _presets() -> dict:
    global _PRESETS
    if _PRESETS is None:
        _PRESETS = _load_data("poses.json")
    return _PRESETS


def forward_kinematics(root_position, directions: dict[str, list[float]],
                       attributes: dict[str, BoneAttributes]) -> dict[str, np.ndarray]:
    """Joint positions from per-bone unit directions and bone lengths."""
    pos = {ROOT: np.asarray(root_position, dtype=float)}
    for parent, child, tag in BONES:
        d = np.asarray(directions[tag], dtype=float)
        d = d / np.linalg.norm(d)
        pos[child] = pos[parent] + d * attributes[tag].length
    return pos


def preset_pose(name: str, attributes: dict[str, BoneAttributes] | None = None) -> Pose:
    """Deterministic preset pose, posed with the given (or default) attributes."""
    table = _presets()
    if name not in table:
        raise AvatarValidationError(f"unknown pose preset '{name}', expected one of {sorted(table)}")
    attributes = attributes or default_attributes()
    entry = table[name]
    return Pose(name=name, joint_positions=forward_kinematics(
        entry["root_position"], entry["directions"], attributes))


@dataclass(frozen=True, eq=False)
class Avatar:
    attributes: dict[str, BoneAttributes]
    pose: Pose

    def __post_init__(self):
        missing = [t for _, _, t in BONES if t not in self.attributes]
        if missing:
            raise AvatarValidationError(f"missing bone attributes for {missing}")
        if set(self.pose.joint_positions) != set(JOINTS):
            raise AvatarValidationError("pose must position all 20 joints")
        for parent, child, tag in BONES:
            got = float(np.linalg.norm(self.pose.position(child) - self.pose.position(parent)))
            want = self.attributes[tag].length
            if abs(got - want) > BONE_LENGTH_TOL:
                raise AvatarValidationError(
                    f"bone length invariant violated for '{tag}': "
                    f"pose gives {got:.8f}, attribute says {want:.8f}")

    # -- construction --------------------------------------------------------

    @classmethod
    def default(cls, pose_name: str = "normal_sitting") -> "Avatar":
        attrs = default_attributes()
        return cls(attributes=attrs, pose=preset_pose(pose_name, attrs))

    def with_pose(self, name: str) -> "Avatar":
        return Avatar(self.attributes, preset_pose(name, self.attributes))

    def scaled(self, s: float) -> "Avatar":
        """Uniformly scaled avatar, same pose preset re-derived."""
        if s <= 0:
            raise AvatarValidationError("scale factor must be positive")
        attrs = {t: BoneAttributes(a.length * s, a.width * s, a.thickness * s)
                 for t, a in self.attributes.items()}
        if self.pose.name in _presets():
            pose = preset_pose(self.pose.name, attrs)
        else:
            origin = self.pose.position(ROOT)
            pose = Pose("custom", {j: origin + (p - origin) * s
                                   for j, p in self.pose.joint_positions.items()})
        return Avatar(attrs, pose)


def _subtree(joint: str) -> list[str]:
    out = [joint]
    for child in _CHILDREN[joint]:
        out.extend(_subtree(child))
    return out


def _paired_tags(bone_tag: str) -> list[str]:
    """Resolve a possibly side-less tag to the concrete bone tags it names."""
    if bone_tag in _BONE_BY_TAG:
        return [bone_tag]
    pair = [t for t in (f"{bone_tag}-l", f"{bone_tag}-r") if t in _BONE_BY_TAG]
    if not pair:
        raise AvatarValidationError(f"unknown bone tag '{bone_tag}'")
    return pair


def _mirror_tag(tag: str) -> str | None:
    if tag.endswith("-l"):
        return tag[:-2] + "-r"
    if tag.endswith("-r"):
        return tag[:-2] + "-l"
    return None


def set_attribute(avatar: Avatar, bone_tag: str, attribute: str, value: float,
                  asymmetric: bool = False) -> Avatar:
    """New avatar with a bone attribute changed.

    Length edits slide the bone's child subtree along the current bone
    direction so every bone keeps its attribute length. Left/right pairs are
    edited together unless asymmetric=True.
    """
    if attribute not in ("length", "width", "thickness"):
        raise AvatarValidationError(f"unknown attribute '{attribute}'")
    if not (np.isfinite(value) and value > 0):
        raise AvatarValidationError(f"{attribute} must be positive, got {value!r}")
    tags = _paired_tags(bone_tag)
    if not asymmetric:
        extra = [m for t in tags if (m := _mirror_tag(t)) and m not in tags]
        tags = sorted(set(tags) | set(extra))

    attrs = dict(avatar.attributes)
    positions = {j: p.copy() for j, p in avatar.pose.joint_positions.items()}
    for tag in tags:
        old = attrs[tag]
        attrs[tag] = replace(old, **{attribute: float(value)})
        if attribute == "length":
            parent, child = _BONE_BY_TAG[tag]
            d = positions[child] - positions[parent]
            d = d / np.linalg.norm(d)
            shift = (value - old.length) * d
            for j in _subtree(child):
                positions[j] = positions[j] + shift
    return Avatar(attrs, Pose(avatar.pose.name, positions))


def drag_joint(avatar: Avatar, joint: str, screen_delta: tuple[float, float],
               camera: Camera = Camera()) -> Avatar:
    """Rigidly repose the skeleton by dragging one joint on screen.

    The screen delta maps into the plane of the joint's two incident bones
    (bone plane + camera up for leaf joints, camera plane when degenerate).
    The parent bone rotates to carry the joint toward the target and the
    joint's subtree translates with it, so all bone lengths are preserved.
    Dragging the root translates the whole body in the camera plane.
    """
    if joint not in JOINTS:
        raise AvatarValidationError(f"unknown joint '{joint}'")
    dx, dy = float(screen_delta[0]), float(screen_delta[1])
    if dx == 0.0 and dy == 0.0:
        return avatar
    right, true_up, forward = camera.basis()
    delta = dx * right + dy * true_up
    positions = {j: p.copy() for j, p in avatar.pose.joint_positions.items()}

    if joint == ROOT:
        for j in positions:
            positions[j] = positions[j] + delta
        return Avatar(avatar.attributes, Pose("custom", positions))

    parent = _PARENT[joint]
    d1 = positions[joint] - positions[parent]
    children = _CHILDREN[joint]
    if children:
        d2 = positions[children[0]] - positions[joint]
    else:
        d2 = true_up
    n = np.cross(d1, d2)
    if np.linalg.norm(n) > 1e-9:
        n = n / np.linalg.norm(n)
        proj = delta - np.dot(delta, n) * n
    else:
        proj = delta  # collinear bones: fall back to the camera-parallel plane

    target = positions[joint] + proj
    length = avatar.attributes[_BONE_BY_CHILD[joint][2]].length
    offset = target - positions[parent]
    dist = np.linalg.norm(offset)
    new_pos = positions[parent] + (length / dist) * offset if dist > 1e-12 else positions[joint]
    shift = new_pos - positions[joint]
    for j in _subtree(joint):
        positions[j] = positions[j] + shift
    return Avatar(avatar.attributes, Pose("custom", positions))


# ---------------------------------------------------------------------------
# Measurements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BodyMeasurements:
    hip_width: float
    hip_height: float
    upper_leg_length: float
    lower_arm_height: float
    spine_leg_angle: float  # degrees
    body_length: float
    support_span: float


def ground_level(avatar: Avatar) -> float:
    """Support plane height: lowest foot joint in the current pose."""
    return min(float(avatar.pose.position(j)[1]) for j in FOOT_JOINTS)


def spine_direction(avatar: Avatar) -> np.ndarray:
    d = avatar.pose.position("chest") - avatar.pose.position("hip-center")
    return d / np.linalg.norm(d)


def measure(avatar: Avatar) -> BodyMeasurements:
    pos = avatar.pose.position
    ground = ground_level(avatar)
    spine = spine_direction(avatar)
    leg = pos("knee-l") - pos("hip-l")
    leg = leg / np.linalg.norm(leg)
    angle = float(np.degrees(np.arccos(np.clip(np.dot(spine, leg), -1.0, 1.0))))
    lower_arm_mid_y = 0.5 * (
        0.5 * (pos("elbow-l") + pos("wrist-l"))[1] + 0.5 * (pos("elbow-r") + pos("wrist-r"))[1])
    return BodyMeasurements(
        hip_width=avatar.attributes["body-bone"].width,
        hip_height=float(pos("hip-center")[1]) - ground,
        upper_leg_length=avatar.attributes["upper-leg-l"].length,
        lower_arm_height=lower_arm_mid_y - ground,
        spine_leg_angle=angle,
        body_length=avatar.attributes["chest-bone"].length + avatar.attributes["body-bone"].length,
        support_span=float(np.dot(pos("head") - pos("hip-center"), spine)),
    )


def knee_angle(avatar: Avatar, side: str = "l") -> float:
    """Interior angle at the knee in degrees (180 = straight leg)."""
    pos = avatar.pose.position
    thigh = pos(f"hip-{side}") - pos(f"knee-{side}")
    shin = pos(f"ankle-{side}") - pos(f"knee-{side}")
    c = np.dot(thigh, shin) / (np.linalg.norm(thigh) * np.linalg.norm(shin))
    return float(np.degrees(np.arccos(np.clip(c, -1.0, 1.0))))


def eye_height(avatar: Avatar) -> float:
    """Head joint height above the support plane (used for monitor placement)."""
    return float(avatar.pose.position("head")[1]) - ground_level(avatar)


# ---------------------------------------------------------------------------
# Document form (service and file interchange)
# ---------------------------------------------------------------------------


def avatar_to_dict(avatar: Avatar) -> dict:
    doc: dict = {
        "attributes": {t: {"length": a.length, "width": a.width, "thickness": a.thickness}
                       for t, a in sorted(avatar.attributes.items())},
        "pose": {"name": avatar.pose.name},
    }
    if avatar.pose.name not in _presets():
        doc["pose"]["joint_positions"] = {j: avatar.pose.position(j).tolist() for j in JOINTS}
    return doc


def avatar_from_dict(doc: dict) -> Avatar:
    if not isinstance(doc, dict):
        raise AvatarValidationError("avatar document must be an object")
    attrs = default_attributes()
    for tag, vals in (doc.get("attributes") or {}).items():
        if tag not in attrs:
            raise AvatarValidationError(f"unknown bone tag '{tag}'")
        if not isinstance(vals, dict):
            raise AvatarValidationError(f"attributes['{tag}'] must be an object")
        merged = {"length": attrs[tag].length, "width": attrs[tag].width,
                  "thickness": attrs[tag].thickness}
        for k, v in vals.items():
            if k not in merged:
                raise AvatarValidationError(f"attributes['{tag}']: unknown attribute '{k}'")
            merged[k] = v
        attrs[tag] = BoneAttributes(**merged)

    pose_doc = doc.get("pose") or {"name": "normal_sitting"}
    name = pose_doc.get("name", "custom")
    if "joint_positions" in pose_doc:
        jp = pose_doc["joint_positions"]
        if set(jp) != set(JOINTS):
            raise AvatarValidationError("pose.joint_positions must cover all 20 joints")
        pose = Pose("custom", {j: np.asarray(jp[j], dtype=float).reshape(3) for j in JOINTS})
    else:
        pose = preset_pose(name, attrs)
    return Avatar(attrs, pose)


def avatar_hash(avatar: Avatar) -> str:
    doc = avatar_to_dict(avatar)
    if avatar.pose.name in _presets():
        # preset positions derive from attributes; the name pins them
        doc["pose"] = {"name": avatar.pose.name}
    else:
        doc["pose"]["joint_positions"] = {
            j: avatar.pose.position(j).tolist() for j in JOINTS}
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()
