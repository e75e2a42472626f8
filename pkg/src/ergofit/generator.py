"""Procedural furniture generator for corpora and experiments.

Chairs come in four styles with style-characteristic proportions:

    office:  seat top 0.46-0.50 m, near-vertical back (92-99 deg opening),
             armrest pads on posts, five slanted legs
    bench:   seat 1.26-1.36 m wide, four corner legs, low back on half of
             the seeds, no arms
    beach:   seat top 0.315-0.348 m, back reclined to a 139-152 deg opening
    bar:     seat top 0.71-0.78 m, four cylindrical legs, no back/arms

All dimensions are drawn deterministically from the ranges above given a
seed; passing explicit parameters outside the style range raises
ParamValidationError. Components exactly abut and share interface sample
points, so contact detection is exact. Proxies are constructed analytically
from the known primitive dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .geometry import Cylinder, OrientedBox, Proxy
from .shape import Component, Shape, build_graph

STYLES = ("office", "bench", "beach", "bar")


class ParamValidationError(ValueError):
    """A generator parameter fell outside its documented style range."""


@dataclass(frozen=True)
class ChairParams:
    """Optional overrides; None means draw from the style range."""

    seat_width: float | None = None    # lateral (x) size of the seat, m
    seat_depth: float | None = None    # front-back (z) size, m
    seat_height: float | None = None   # world height of the seat top face, m
    back_angle_deg: float | None = None  # opening angle seat plane -> back
    back_length: float | None = None   # back slab length along its slope, m
    arm_clearance: float | None = None  # armrest pad top above the seat top, m
    has_back: bool | None = None
    has_arms: bool | None = None


_RANGES: dict[str, dict[str, tuple[float, float]]] = {
    "office": {
        "seat_width": (0.42, 0.46),
        "seat_depth": (0.46, 0.49),
        "seat_height": (0.46, 0.50),
        "back_angle_deg": (92.0, 99.0),
        "back_length": (0.55, 0.68),
        "arm_clearance": (0.17, 0.22),
    },
    "bench": {
        "seat_width": (1.26, 1.36),
        "seat_depth": (0.46, 0.49),
        "seat_height": (0.46, 0.50),
        "back_angle_deg": (92.0, 99.0),
        "back_length": (0.55, 0.65),
        "arm_clearance": (0.17, 0.22),
    },
    "beach": {
        "seat_width": (0.42, 0.46),
        "seat_depth": (0.46, 0.49),
        "seat_height": (0.315, 0.348),
        "back_angle_deg": (139.0, 152.0),
        "back_length": (0.56, 0.72),
        "arm_clearance": (0.17, 0.22),
    },
    "bar": {
        "seat_width": (0.42, 0.46),
        "seat_depth": (0.46, 0.49),
        "seat_height": (0.71, 0.78),
        "back_angle_deg": (92.0, 99.0),
        "back_length": (0.55, 0.68),
        "arm_clearance": (0.17, 0.22),
    },
}

_FLAGS = {
    "office": {"has_back": True, "has_arms": True},
    "bench": {"has_back": None, "has_arms": False},  # back on half the seeds
    "beach": {"has_back": True, "has_arms": False},
    "bar": {"has_back": False, "has_arms": False},
}


# ---------------------------------------------------------------------------
# Deterministic surface sampling
# ---------------------------------------------------------------------------


def _grid(nu: int, nv: int) -> np.ndarray:
    u = np.linspace(-1.0, 1.0, nu)
    v = np.linspace(-1.0, 1.0, nv)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    return np.stack([uu.ravel(), vv.ravel()], axis=1)


def _box_surface(center, axes, half, n_target: int = 400) -> np.ndarray:
    """Grid samples on all six faces of an oriented box."""
    center = np.asarray(center, dtype=float)
    axes = np.asarray(axes, dtype=float)
    half = np.asarray(half, dtype=float)
    area = 0.0
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        area += 8.0 * half[i] * half[j]
    step = max(0.015, math.sqrt(max(area, 1e-9) / max(n_target, 8)))
    pts = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        # at least 3 rows across thin dimensions so face interiors are sampled
        ni = max(3, int(round(2 * half[i] / step)) + 1)
        nj = max(3, int(round(2 * half[j] / step)) + 1)
        uv = _grid(ni, nj)
        face = (uv[:, :1] * half[i]) * axes[i] + (uv[:, 1:] * half[j]) * axes[j]
        for sign in (-1.0, 1.0):
            pts.append(center + face + sign * half[k] * axes[k])
    return np.vstack(pts)


def _cylinder_surface(center, radius: float, y0: float, y1: float,
                      n_target: int = 300) -> np.ndarray:
    """Ring samples on a vertical cylinder's lateral surface, caps excluded."""
    center = np.asarray(center, dtype=float)
    length = y1 - y0
    area = 2 * math.pi * radius * length
    step = max(0.012, math.sqrt(max(area, 1e-9) / max(n_target, 8)))
    n_theta = max(8, int(round(2 * math.pi * radius / step)))
    n_rings = max(2, int(round(length / step)) + 1)
    theta = np.linspace(0.0, 2 * math.pi, n_theta, endpoint=False)
    ring = np.stack([radius * np.cos(theta), np.zeros(n_theta), radius * np.sin(theta)], axis=1)
    ys = np.linspace(y0, y1, n_rings)
    pts = [ring + np.array([center[0], y, center[2]]) for y in ys]
    return np.vstack(pts)


def _patch(cx: float, y: float, cz: float, r: float) -> np.ndarray:
    """2x2 interface weld patch in the plane y=const."""
    return np.array([[cx + sx * r, y, cz + sz * r]
                     for sx in (-1, 1) for sz in (-1, 1)], dtype=float)


class _Builder:
    """Accumulates components and shared interface points."""

    def __init__(self):
        self.parts: dict[str, dict] = {}

    def add(self, comp_id: str, tag: str, samples: np.ndarray, proxy: Proxy):
        self.parts[comp_id] = {"tag": tag, "samples": [samples], "proxy": proxy}

    def weld(self, comp_a: str, comp_b: str | None, points: np.ndarray):
        self.parts[comp_a]["samples"].append(points)
        if comp_b is not None:
            self.parts[comp_b]["samples"].append(points)

    def finish(self, shape_id: str, style_label: str | None) -> Shape:
        comps = [Component(id=cid, tag=p["tag"], samples=np.vstack(p["samples"]),
                           proxy=p["proxy"])
                 for cid, p in self.parts.items()]
        shape = Shape(id=shape_id, components=comps, style_label=style_label)
        shape.graph = build_graph(shape)
        return shape


# ---------------------------------------------------------------------------
# Chair assembly
# ---------------------------------------------------------------------------


def _resolve_params(style: str, params: ChairParams, rng: np.random.Generator) -> dict:
    ranges = _RANGES[style]
    out: dict = {}
    for f in fields(ChairParams):
        value = getattr(params, f.name)
        if f.name in ("has_back", "has_arms"):
            continue
        lo, hi = ranges[f.name]
        if value is None:
            out[f.name] = float(rng.uniform(lo, hi))
        else:
            if not (lo <= value <= hi):
                raise ParamValidationError(
                    f"{style}: {f.name}={value} outside documented range [{lo}, {hi}]")
            out[f.name] = float(value)
    flags = _FLAGS[style]
    for name in ("has_back", "has_arms"):
        value = getattr(params, name)
        if value is None:
            default = flags[name]
            out[name] = bool(rng.integers(0, 2)) if default is None else default
        else:
            out[name] = bool(value)
    return out


def _axis_aligned_box(builder: _Builder, comp_id: str, tag: str,
                      center, half, n_target: int = 400):
    center = np.asarray(center, dtype=float)
    half = np.asarray(half, dtype=float)
    samples = _box_surface(center, np.eye(3), half, n_target)
    builder.add(comp_id, tag, samples, OrientedBox(center=center, axes=np.eye(3), half_extents=half))


def _back_direction(angle_deg: float) -> np.ndarray:
    """Unit up-slope direction of a back slab with the given opening angle."""
    a = math.radians(angle_deg)
    return np.array([0.0, math.sin(a), math.cos(a)])


def _add_back(builder: _Builder, p: dict, thickness: float, width_factor: float):
    # the slab hangs from a thin hinge line on the seat surface, offset to the
    # up-forward side of the line with recline-scaled clearance, so the whole
    # slab clears the seat and angle edits pivot cleanly about the line
    u = _back_direction(p["back_angle_deg"])
    n = np.cross(np.array([1.0, 0.0, 0.0]), u)   # up-forward for opening > 90 deg
    gap = 0.02 / u[1]
    wb = p["seat_width"] * width_factor
    length = p["back_length"]
    attach = np.array([0.0, p["seat_height"], p["seat_depth"] / 2 - 0.03])
    center = attach + u * (gap + length / 2) + n * (thickness / 2)
    axes = np.stack([u, np.array([1.0, 0.0, 0.0]), n])
    half = np.array([length / 2, wb / 2, thickness / 2])
    samples = _box_surface(center, axes, half)
    builder.add("back", "back", samples,
                OrientedBox(center=center, axes=axes, half_extents=half))
    xs = np.linspace(-0.4 * wb, 0.4 * wb, 9)
    weld = np.stack([xs, np.full(9, attach[1]), np.full(9, attach[2])], axis=1)
    builder.weld("back", "seat", weld)


def _add_box_leg(builder: _Builder, comp_id: str, top, bottom, half_cross: float):
    top = np.asarray(top, dtype=float)
    bottom = np.asarray(bottom, dtype=float)
    d = top - bottom
    length = float(np.linalg.norm(d))
    d = d / length
    ref = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 0.0, 1.0])
    n1 = np.cross(d, ref)
    n1 /= np.linalg.norm(n1)
    n2 = np.cross(d, n1)
    axes = np.stack([d, n1, n2])
    # slightly rectangular cross so the PCA frame of the samples is stable
    half = np.array([length / 2, half_cross, 0.85 * half_cross])
    center = (top + bottom) / 2
    samples = _box_surface(center, axes, half, n_target=220)
    builder.add(comp_id, "leg", samples,
                OrientedBox(center=center, axes=axes, half_extents=half))
    r_weld = min(0.01, 0.55 * half_cross)
    builder.weld(comp_id, "seat", _patch(top[0], top[1], top[2], r_weld))
    builder.weld(comp_id, None, _patch(bottom[0], 0.0, bottom[2], 0.75 * r_weld))


def generate_chair(style: str, params: ChairParams | None = None, seed: int = 0) -> Shape:
    """Deterministic tagged chair of the given style."""
    if style not in STYLES:
        raise ParamValidationError(f"unknown style '{style}', expected one of {STYLES}")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(STYLES.index(style),)))
    p = _resolve_params(style, params or ChairParams(), rng)

    b = _Builder()
    w, d, h = p["seat_width"], p["seat_depth"], p["seat_height"]
    seat_t = 0.06 if style == "bench" else (0.04 if style == "beach" else 0.05)
    _axis_aligned_box(b, "seat", "seat", (0.0, h - seat_t / 2, 0.0), (w / 2, seat_t / 2, d / 2))

    if p["has_back"]:
        width_factor = 0.95 if style in ("bench", "beach") else 0.92
        _add_back(b, p, thickness=0.035 if style == "beach" else 0.04, width_factor=width_factor)

    if p["has_arms"]:
        xa = w / 2 - 0.03
        pad_top = h + p["arm_clearance"]
        pad_half = np.array([0.025, 0.015, 0.13])
        post_h = pad_top - 0.03 - h
        for side, sx in (("l", 1.0), ("r", -1.0)):
            pc = np.array([sx * xa, pad_top - pad_half[1], 0.0])
            _axis_aligned_box(b, f"arm-{side}", "arm", pc, pad_half, n_target=160)
            stc = np.array([sx * xa, h + post_h / 2, 0.0])
            _axis_aligned_box(b, f"post-{side}", "other", stc, (0.02, post_h / 2, 0.02), n_target=120)
            b.weld(f"post-{side}", "seat", _patch(sx * xa, h, 0.0, 0.012))
            b.weld(f"post-{side}", f"arm-{side}", _patch(sx * xa, pad_top - 0.03, 0.0, 0.012))

    bottom_y = h - seat_t
    if style == "office":
        r_bot = float(rng.uniform(0.20, 0.26))
        for i, az in enumerate((90.0, 162.0, 234.0, 306.0, 18.0)):
            a = math.radians(az)
            top = (0.04 * math.cos(a), bottom_y, 0.04 * math.sin(a))
            bot = (r_bot * math.cos(a), 0.0, r_bot * math.sin(a))
            _add_box_leg(b, f"leg-{i + 1}", top, bot, 0.011)
    elif style == "bar":
        # thin rod legs: the tied radial scale of a cylinder cannot follow an
        # anisotropic seat stretch, and the contact mismatch grows with radius
        r_leg = float(rng.uniform(0.008, 0.011))
        i = 0
        for sx in (-1.0, 1.0):
            for sz in (-1.0, 1.0):
                i += 1
                cx, cz = sx * (w / 2 - 0.05), sz * (d / 2 - 0.05)
                center = np.array([cx, bottom_y / 2, cz])
                samples = _cylinder_surface(center, r_leg, 0.0, bottom_y)
                b.add(f"leg-{i}", "leg", samples,
                      Cylinder(center=center, axis=np.array([0.0, 1.0, 0.0]),
                               radius=r_leg, half_length=bottom_y / 2))
                top_ring = _cylinder_surface(center, r_leg, bottom_y, bottom_y, n_target=8)[:12]
                b.weld(f"leg-{i}", "seat", top_ring)
        assert i == 4
    else:  # bench, beach: four vertical corner legs
        hc = 0.025 if style == "bench" else 0.02
        inset = 0.07 if style == "bench" else 0.05
        i = 0
        for sx in (-1.0, 1.0):
            for sz in (-1.0, 1.0):
                i += 1
                cx, cz = sx * (w / 2 - inset), sz * (d / 2 - inset)
                _add_box_leg(b, f"leg-{i}", (cx, bottom_y, cz), (cx, 0.0, cz), hc)

    return b.finish(f"{style}-{seed}", style)


def generate_corpus(per_style: int, seed: int = 0, styles=STYLES) -> list[Shape]:
    """per_style chairs of each style, deterministically seeded from seed."""
    ss = np.random.SeedSequence(seed)
    shapes = []
    for style in styles:
        for child in ss.spawn(per_style):
            shapes.append(generate_chair(style, seed=int(child.generate_state(1)[0])))
    return shapes


# ---------------------------------------------------------------------------
# Companion furniture for co-retrieval
# ---------------------------------------------------------------------------


def generate_table(seed: int = 0) -> Shape:
    """Work table: top slab (functional surface tagged 'seat') on four legs."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(11,)))
    w = float(rng.uniform(1.0, 1.3))
    d = float(rng.uniform(0.6, 0.75))
    h = float(rng.uniform(0.70, 0.78))
    t = 0.04
    b = _Builder()
    _axis_aligned_box(b, "seat", "seat", (0.0, h - t / 2, 0.0), (w / 2, t / 2, d / 2))
    i = 0
    for sx in (-1.0, 1.0):
        for sz in (-1.0, 1.0):
            i += 1
            cx, cz = sx * (w / 2 - 0.06), sz * (d / 2 - 0.06)
            _add_box_leg(b, f"leg-{i}", (cx, h - t, cz), (cx, 0.0, cz), 0.022)
    shape = b.finish(f"table-{seed}", "table")
    return shape


def generate_monitor(seed: int = 0) -> Shape:
    """Desk monitor: screen slab (tagged 'back') on a stand column and base."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(13,)))
    sw = float(rng.uniform(0.50, 0.60))
    sh = float(rng.uniform(0.30, 0.36))
    stand_h = float(rng.uniform(0.10, 0.14))
    b = _Builder()
    _axis_aligned_box(b, "base", "base", (0.0, 0.01, 0.0), (0.11, 0.01, 0.08), n_target=150)
    _axis_aligned_box(b, "stand", "leg", (0.0, 0.02 + stand_h / 2, 0.0), (0.025, stand_h / 2, 0.025),
                      n_target=120)
    screen_c = (0.0, 0.02 + stand_h + sh / 2, 0.0)
    _axis_aligned_box(b, "screen", "back", screen_c, (sw / 2, sh / 2, 0.01), n_target=300)
    b.weld("stand", "base", _patch(0.0, 0.02, 0.0, 0.012))
    b.weld("stand", "screen", _patch(0.0, 0.02 + stand_h, 0.0, 0.012))
    return b.finish(f"monitor-{seed}", "monitor")
