"""Contact-based deformation: constraint application and graph propagation.

Constrained components receive direct transforms (translation to a target
height, axis scale to a band endpoint, rotation to a target opening angle).
Deformation then propagates greedily through the contact graph: the
untreated neighbor with the most displaced contacts is fitted to those
contacts in the least-squares sense, one component at a time, until the
whole shape is treated. Groups of constraints (heights, widths, lengths,
angles) run in order, each with a fresh propagation front; earlier
constraints are re-enforced on every newly fitted component.

Floor-standing components additionally anchor their lowest sample points
vertically, so lifting a seat stretches its legs instead of levitating them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import DEFAULT_CONFIG, EngineConfig, SolverConfig
from .constraints import (
    ConstraintGroup,
    ErgonomicConstraint,
    back_up_axis,
    check_constraint,
)
from .geometry import (
    Aabb,
    AffineTransform,
    Cylinder,
    DegenerateInputError,
    Proxy,
    aabb_of,
    mirror_proxy,
    mirrored_transform,
    proxies_match,
    transform_proxy,
)
from .shape import Component, Contact, RelationGraph, Shape, SymmetryEdge

log = logging.getLogger(__name__)

LATERAL = np.array([1.0, 0.0, 0.0])
UP = np.array([0.0, 1.0, 0.0])
FRONT = np.array([0.0, 0.0, 1.0])

PART_OF_TAG = {"seat": "seat", "back": "back", "arm": "arm", "headrest": "headrest",
               "other": "other", "leg": "base", "base": "base"}

VIOLATION_TOL = 1e-6


class TransformClass(str, Enum):
    TRANSLATION = "translation"
    TRANSLATION_AXIS_SCALE = "translation+axis_scale"
    TRANSLATION_ROTATION_AXIS_SCALE = "translation+rotation+axis_scale"


# ---------------------------------------------------------------------------
# Least-squares contact transform fitting
# ---------------------------------------------------------------------------


def _cylinder_frame(proxy: Cylinder) -> np.ndarray:
    a = proxy.axis
    ref = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    n1 = np.cross(a, ref)
    n1 /= np.linalg.norm(n1)
    return np.stack([a, n1, np.cross(a, n1)])


def proxy_frame(proxy: Proxy) -> tuple[np.ndarray, np.ndarray]:
    """(center, frame rows) of a proxy's local orthonormal frame."""
    if isinstance(proxy, Cylinder):
        return proxy.center, _cylinder_frame(proxy)
    return proxy.center, proxy.axes


def _coerce_positive(linear: np.ndarray, scale_min: float) -> np.ndarray:
    """Clamp the singular values of a near-degenerate linear part."""
    u, sv, vt = np.linalg.svd(linear)
    if np.linalg.det(u) * np.linalg.det(vt) < 0:
        u = u.copy()
        u[:, -1] *= -1
        sv = sv.copy()
        sv[-1] *= -1
    return u @ np.diag(np.maximum(sv, scale_min)) @ vt


def _scale_penalties(q: np.ndarray, w: np.ndarray, frame: np.ndarray,
                     tie_radial: bool, config: SolverConfig,
                     frame_extents: np.ndarray | None = None) -> np.ndarray:
    """Tikhonov weights pulling each scale parameter toward 1.

    With `frame_extents` (the component's full extents along the frame axes)
    the pull grows with the parameter's leverage times the ratio of component
    extent to contact-cluster span. A cluster much smaller than the component
    then cannot extrapolate a tiny tangential drift into a large global scale,
    while full-lever fits (a leg anchored at the floor and displaced at the
    seat) stay essentially unbiased. Without extents only the small absolute
    pull applies.
    """
    lev = np.zeros(3)
    for j in range(3):
        coeff = q[:, j:j + 1] * frame[j]            # (n, 3) world components
        lev[j] = float(np.sum(w * coeff ** 2))
    if frame_extents is not None:
        spans = q.max(axis=0) - q.min(axis=0)
        ratio = np.empty(3)
        for j in range(3):
            if spans[j] <= 0:
                ratio[j] = 1e4
            else:
                ratio[j] = min(max(frame_extents[j] / spans[j] - 1.0, 0.0), 1e4)
        lev = lev * ratio
    else:
        lev = np.zeros(3)
    if tie_radial:
        lev = np.array([lev[0], lev[1] + lev[2]])
    return config.scale_reg + config.scale_reg_rel * lev


def fit_contact_transform(src, dst, klass: TransformClass, center,
                          frame: np.ndarray | None = None,
                          axis_weights: np.ndarray | None = None,
                          tie_radial: bool = False,
                          frame_extents: np.ndarray | None = None,
                          config: SolverConfig = SolverConfig()) -> AffineTransform:
    """Least-squares transform of the given class mapping src points to dst.

    Scales (and the rotation-class linear part) act about `center` in the
    orthonormal `frame` (rows; world axes when omitted). `axis_weights` is an
    optional (n, 3) array of per-point, per-world-axis weights; zero entries
    drop a coordinate from the fit, which is how vertical-only floor anchors
    enter. `frame_extents` (the component's extents along the frame axes)
    engages the span-aware scale regularizer of _scale_penalties.
    Underdetermined scale directions are pulled to identity; fitted scales
    are clamped positive.
    """
    src = np.asarray(src, dtype=float).reshape(-1, 3)
    dst = np.asarray(dst, dtype=float).reshape(-1, 3)
    if len(src) == 0 or src.shape != dst.shape:
        raise DegenerateInputError("contact fitting needs one or more point pairs")
    if np.array_equal(src, dst):
        return AffineTransform.identity()
    center = np.asarray(center, dtype=float)
    if frame is None:
        frame = np.eye(3)
    w = np.ones_like(src) if axis_weights is None else np.asarray(axis_weights, dtype=float)

    if klass == TransformClass.TRANSLATION:
        totals = w.sum(axis=0)
        delta = np.where(totals > 0, (w * (dst - src)).sum(axis=0) / np.where(totals > 0, totals, 1.0), 0.0)
        return AffineTransform.from_translation(delta)

    if klass == TransformClass.TRANSLATION_AXIS_SCALE:
        q = (src - center) @ frame.T                 # local coords, (n, 3)
        n_scale = 2 if tie_radial else 3
        n_par = n_scale + 3
        rows = []
        rhs = []
        wt = []
        for i in range(len(src)):
            for k in range(3):                        # world coordinate k
                if w[i, k] == 0.0:
                    continue
                row = np.zeros(n_par)
                if tie_radial:
                    row[0] = q[i, 0] * frame[0, k]
                    row[1] = q[i, 1] * frame[1, k] + q[i, 2] * frame[2, k]
                else:
                    for j in range(3):
                        row[j] = q[i, j] * frame[j, k]
                row[n_scale + k] = 1.0
                rows.append(row)
                rhs.append(dst[i, k] - center[k])
                wt.append(w[i, k])
        a = np.asarray(rows)
        b = np.asarray(rhs)
        wt = np.asarray(wt)
        ata = a.T @ (a * wt[:, None])
        atb = a.T @ (b * wt)
        reg = np.zeros(n_par)
        reg[:n_scale] = _scale_penalties(q, w, frame, tie_radial, config, frame_extents)
        reg[n_scale:] = 1e-12                        # keeps the system SPD
        ata[np.diag_indices(n_par)] += reg
        atb[:n_scale] += reg[:n_scale]               # pull scales toward 1
        x = np.linalg.solve(ata, atb)
        if tie_radial:
            scale = np.array([x[0], x[1], x[1]])
        else:
            scale = x[:3]
        scale = np.maximum(scale, config.scale_min)
        return AffineTransform.from_components(np.eye(3), scale, frame, x[n_scale:], center)

    if klass == TransformClass.TRANSLATION_ROTATION_AXIS_SCALE:
        # full linear part about center, Tikhonov-pulled toward identity;
        # the polar factors of the result are the rotation and framed scale
        q = src - center
        n_par = 12
        ata = np.zeros((n_par, n_par))
        atb = np.zeros(n_par)
        for i in range(len(src)):
            for k in range(3):
                if w[i, k] == 0.0:
                    continue
                row = np.zeros(n_par)
                row[3 * k:3 * k + 3] = q[i]
                row[9 + k] = 1.0
                ata += w[i, k] * np.outer(row, row)
                atb += w[i, k] * row * (dst[i, k] - center[k])
        lin_pen = _scale_penalties(q, w, np.eye(3), False, config, frame_extents)
        reg = np.empty(n_par)
        for k in range(3):
            reg[3 * k:3 * k + 3] = lin_pen
        reg[9:] = 1e-12
        ata[np.diag_indices(n_par)] += reg
        target = np.zeros(n_par)
        target[[0, 4, 8]] = 1.0                      # identity linear part
        atb += reg * target
        x = np.linalg.solve(ata, atb)
        linear = x[:9].reshape(3, 3)
        if np.linalg.det(linear) <= 0 or np.linalg.svd(linear, compute_uv=False)[-1] < config.scale_min:
            linear = _coerce_positive(linear, config.scale_min)
        t = x[9:]
        return AffineTransform(linear, t + center - linear @ center)

    raise ValueError(f"unknown transform class {klass!r}")


def fit_objective(t: AffineTransform, src, dst, klass: TransformClass, center=None,
                  frame: np.ndarray | None = None, axis_weights=None,
                  tie_radial: bool = False, frame_extents: np.ndarray | None = None,
                  config: SolverConfig = SolverConfig()) -> float:
    """The regularized objective fit_contact_transform minimizes (for tests)."""
    src = np.asarray(src, dtype=float).reshape(-1, 3)
    dst = np.asarray(dst, dtype=float).reshape(-1, 3)
    w = np.ones_like(src) if axis_weights is None else np.asarray(axis_weights, dtype=float)
    resid = float(np.sum(w * (t.apply(src) - dst) ** 2))
    if klass == TransformClass.TRANSLATION:
        return resid
    center = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    if frame is None:
        frame = np.eye(3)
    if klass == TransformClass.TRANSLATION_AXIS_SCALE:
        q = (src - center) @ frame.T
        reg = _scale_penalties(q, w, frame, tie_radial, config, frame_extents)
        # recover the framed per-axis scales of t
        scale_full = np.array([np.linalg.norm(t.linear @ frame[j]) for j in range(3)])
        if tie_radial:
            dev = np.array([scale_full[0] - 1.0, 0.5 * (scale_full[1] + scale_full[2]) - 1.0])
        else:
            dev = scale_full - 1.0
        return resid + float(np.sum(reg * dev ** 2))
    q = src - center
    reg = _scale_penalties(q, w, np.eye(3), False, config, frame_extents)
    dev = t.linear - np.eye(3)
    return resid + float(np.sum(dev ** 2 * reg[None, :]))


# ---------------------------------------------------------------------------
# Direct constraint transforms
# ---------------------------------------------------------------------------


def constraint_transform(c: ErgonomicConstraint, proxy: Proxy,
                         pivot: np.ndarray | None = None) -> AffineTransform:
    """Transform aligning one component's proxy with a constraint.

    Identity when the realized value already sits inside the band. Heights
    translate the proxy top face to the exact target; widths and lengths
    scale to the nearest band endpoint; angles rotate about the lateral line
    through `pivot` (the seat contact centroid) to the exact target.
    """
    lo, hi = c.band
    if c.kind in ("seat_height", "arm_height"):
        top = proxy.top_height()
        if lo <= top <= hi:
            return AffineTransform.identity()
        return AffineTransform.from_translation(np.array([0.0, c.target_value - top, 0.0]))

    if c.kind in ("seat_width", "seat_length"):
        direction = LATERAL if c.kind == "seat_width" else FRONT
        extent = proxy.support_extent(direction)
        if lo <= extent <= hi:
            return AffineTransform.identity()
        s = (lo if extent < lo else hi) / extent
        frame = np.stack([direction, UP, np.cross(direction, UP)])
        return AffineTransform.from_scale((s, 1.0, 1.0), frame, proxy.center)

    if c.kind == "back_length":
        axis, extent = back_up_axis(proxy)
        if lo <= extent <= hi:
            return AffineTransform.identity()
        s = (lo if extent < lo else hi) / extent
        ref = UP if abs(axis[1]) < 0.99 else FRONT
        n1 = np.cross(axis, ref)
        n1 /= np.linalg.norm(n1)
        frame = np.stack([axis, n1, np.cross(axis, n1)])
        return AffineTransform.from_scale((s, 1.0, 1.0), frame, proxy.center)

    if c.kind == "back_angle":
        axis, _ = back_up_axis(proxy)
        angle = float(np.degrees(np.arccos(np.clip(np.dot(axis, FRONT), -1.0, 1.0))))
        if lo <= angle <= hi:
            return AffineTransform.identity()
        pivot = proxy.center if pivot is None else np.asarray(pivot, dtype=float)
        # rotating by +a about +x decreases the opening angle
        return AffineTransform.from_rotation_about(LATERAL, np.radians(angle - c.target_value), pivot)

    raise ValueError(c.kind)


# ---------------------------------------------------------------------------
# Deformation state and propagation
# ---------------------------------------------------------------------------


@dataclass
class DeformationRecord:
    """Per-part bounding boxes and per-component transforms of one run."""

    part_aabbs: dict[str, tuple[Aabb, Aabb]]
    component_transforms: dict[str, AffineTransform]
    conflicts: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


class DeformationState:
    """Working geometry plus the bookkeeping Algorithm-style propagation needs."""

    def __init__(self, shape: Shape, config: EngineConfig = DEFAULT_CONFIG):
        if shape.graph is None:
            raise ValueError(f"shape '{shape.id}' has no relation graph")
        self.original = shape
        self.config = config
        self.samples = {c.id: c.samples for c in shape.components}
        self.proxies: dict[str, Proxy] = {c.id: c.proxy for c in shape.components}
        self.tags = {c.id: c.tag for c in shape.components}
        self.contacts = {ct.key: {"a": ct.key[0], "b": ct.key[1],
                                  "points": ct.points, "centroid": ct.centroid}
                         for ct in shape.graph.contact_edges}
        self.adjacency: dict[str, list[str]] = {c.id: [] for c in shape.components}
        for key in self.contacts:
            self.adjacency[key[0]].append(key[1])
            self.adjacency[key[1]].append(key[0])
        self.contact_count = {cid: len(nbrs) for cid, nbrs in self.adjacency.items()}
        self.total = {c.id: AffineTransform.identity() for c in shape.components}
        self.applied: list[ErgonomicConstraint] = []
        self.treated: set[str] = set()
        self.group_transforms: dict[str, AffineTransform] = {}
        self.anchors = self._find_anchors(shape, config)
        self.angle_tags: set[str] = set()

    @staticmethod
    def _find_anchors(shape: Shape, config: EngineConfig) -> dict[str, dict]:
        """Floor-standing components and the sample points they stand on."""
        tol = config.solver.ground_tol_frac * shape.diagonal
        floor = float(min(c.samples[:, 1].min() for c in shape.components))
        anchors = {}
        for c in shape.components:
            lowest = float(c.samples[:, 1].min())
            if lowest <= floor + tol:
                pts = c.samples[c.samples[:, 1] <= lowest + 0.5 * tol]
                if len(pts) > config.graph.k_max:
                    idx = np.linspace(0, len(pts) - 1, config.graph.k_max).round().astype(int)
                    pts = pts[np.unique(idx)]
                anchors[c.id] = {"points": pts.copy(), "target_y": pts[:, 1].copy()}
        return anchors

    # -- group lifecycle -----------------------------------------------------

    def begin_group(self):
        self.treated = set()
        self.group_transforms = {}

    def stage(self, cid: str, t: AffineTransform):
        prev = self.group_transforms.get(cid)
        self.group_transforms[cid] = t if prev is None else t.compose(prev)
        self.treated.add(cid)

    def commit_group(self):
        for cid, t in self.group_transforms.items():
            if t.is_identity:
                continue
            self.samples[cid] = t.apply(self.samples[cid])
            self.proxies[cid] = transform_proxy(t, self.proxies[cid])
            if cid in self.anchors:
                self.anchors[cid]["points"] = t.apply(self.anchors[cid]["points"])
            self.total[cid] = t.compose(self.total[cid])
        for key, ct in self.contacts.items():
            ta = self.group_transforms.get(ct["a"])
            tb = self.group_transforms.get(ct["b"])
            if (ta is None or ta.is_identity) and (tb is None or tb.is_identity):
                continue
            pa = ta.apply(ct["points"]) if ta is not None else ct["points"]
            pb = tb.apply(ct["points"]) if tb is not None else ct["points"]
            ct["points"] = 0.5 * (pa + pb)
            ca = ta.apply(ct["centroid"]) if ta is not None else ct["centroid"]
            cb = tb.apply(ct["centroid"]) if tb is not None else ct["centroid"]
            ct["centroid"] = 0.5 * (ca + cb)

    # -- queries -------------------------------------------------------------

    def deformed_contacts(self, cid: str) -> list[tuple]:
        """Contacts of cid whose other endpoint is already treated."""
        out = []
        for key, ct in self.contacts.items():
            if cid not in key:
                continue
            other = ct["b"] if cid == ct["a"] else ct["a"]
            if other in self.treated:
                out.append((key, other))
        return out

    def seat_contact_centroid(self, cid: str) -> np.ndarray | None:
        """Centroid of cid's contact with a seat component, if any."""
        for key, ct in self.contacts.items():
            if cid not in key:
                continue
            other = ct["b"] if cid == ct["a"] else ct["a"]
            if self.tags[other] == "seat":
                return ct["centroid"]
        return None


def apply_constraint(c: ErgonomicConstraint, state: DeformationState) -> dict[str, AffineTransform]:
    """Directly enforce one constraint on every component carrying its tag.

    Stages each component's transform in the current group, marks the
    components treated, appends the constraint to state.applied, and returns
    the staged transforms keyed by component id.
    """
    cids = sorted(cid for cid, tag in state.tags.items() if tag == c.target_tag)
    if not cids:
        raise ValueError(f"no component tagged '{c.target_tag}' in shape '{state.original.id}'")
    out = {}
    for cid in cids:
        staged = state.group_transforms.get(cid)
        proxy = state.proxies[cid] if staged is None else transform_proxy(staged, state.proxies[cid])
        pivot = None
        if c.kind == "back_angle":
            pivot = state.seat_contact_centroid(cid)
            if pivot is not None and staged is not None:
                pivot = staged.apply(pivot)
        t = constraint_transform(c, proxy, pivot)
        state.stage(cid, t)
        out[cid] = t
    state.applied.append(c)
    return out


def _fit_component(state: DeformationState, cid: str) -> AffineTransform:
    pairs_src = []
    pairs_dst = []
    weights = []
    for key, other in state.deformed_contacts(cid):
        pts = state.contacts[key]["points"]
        pairs_src.append(pts)
        pairs_dst.append(state.group_transforms[other].apply(pts))
        weights.append(np.ones_like(pts))
    if not pairs_src:
        return AffineTransform.identity()
    if cid in state.anchors:
        anchor = state.anchors[cid]
        tgt = anchor["points"].copy()
        tgt[:, 1] = anchor["target_y"]
        pairs_src.append(anchor["points"])
        pairs_dst.append(tgt)
        w = np.zeros_like(tgt)
        w[:, 1] = 1.0
        weights.append(w)
    src = np.vstack(pairs_src)
    dst = np.vstack(pairs_dst)
    w = np.vstack(weights)

    proxy = state.proxies[cid]
    center, frame = proxy_frame(proxy)
    if isinstance(proxy, Cylinder):
        klass, tie = TransformClass.TRANSLATION_AXIS_SCALE, True
        extents = np.array([2.0 * proxy.half_length, 2.0 * proxy.radius, 2.0 * proxy.radius])
    elif state.tags[cid] in state.angle_tags:
        klass, tie = TransformClass.TRANSLATION_ROTATION_AXIS_SCALE, False
        frame = np.eye(3)
        extents = aabb_of(state.samples[cid]).extents
    else:
        klass, tie = TransformClass.TRANSLATION_AXIS_SCALE, False
        extents = 2.0 * proxy.half_extents
    return fit_contact_transform(src, dst, klass, center, frame,
                                 axis_weights=w, tie_radial=tie,
                                 frame_extents=extents,
                                 config=state.config.solver)


def _reenforce(state: DeformationState, cid: str, t: AffineTransform) -> AffineTransform:
    """Compose fixes for already-applied constraints binding cid after t."""
    tag = state.tags[cid]
    proxy = transform_proxy(t, state.proxies[cid])
    for c in state.applied:
        if c.target_tag != tag:
            continue
        pivot = None
        if c.kind == "back_angle":
            centroid = state.seat_contact_centroid(cid)
            pivot = t.apply(centroid) if centroid is not None else None
        fix = constraint_transform(c, proxy, pivot)
        if fix.is_identity:
            continue
        t = fix.compose(t)
        proxy = transform_proxy(fix, proxy)
    return t


def _propagate_group(state: DeformationState):
    plane_point, plane_normal = None, None
    sym_edges = state.original.graph.symmetry_edges
    if sym_edges:
        plane_point = sym_edges[0].plane_point
        plane_normal = sym_edges[0].plane_normal
    while True:
        candidates = [cid for cid in state.treated
                      if any(nb not in state.treated for nb in state.adjacency[cid])]
        if not candidates:
            break
        p_m = min(candidates, key=lambda cid: (-state.contact_count[cid], cid))
        untreated = [nb for nb in state.adjacency[p_m] if nb not in state.treated]
        p_q = min(untreated, key=lambda cid: (-len(state.deformed_contacts(cid)), cid))
        t = _fit_component(state, p_q)
        t = _reenforce(state, p_q, t)
        state.stage(p_q, t)
        if plane_point is not None:
            for partner in state.original.graph.symmetry_partners(p_q):
                if partner not in state.treated:
                    state.stage(partner, mirrored_transform(t, plane_point, plane_normal)
                                if not t.is_identity else t)


def _part_aabbs(components: list[Component], samples: dict[str, np.ndarray]) -> dict[str, Aabb]:
    boxes: dict[str, Aabb] = {}
    for c in components:
        part = PART_OF_TAG[c.tag]
        box = aabb_of(samples[c.id])
        boxes[part] = box if part not in boxes else boxes[part].union(box)
    return boxes


def propagate(shape: Shape, groups: list[ConstraintGroup],
              config: EngineConfig = DEFAULT_CONFIG) -> tuple[Shape, DeformationRecord]:
    """Deform a shape to satisfy the constraint groups, preserving structure.

    Returns the deformed shape and a record with per-part bounding boxes,
    per-component transforms, unsatisfiable-constraint reports, and any
    connectivity warnings. The input shape is never modified.
    """
    state = DeformationState(shape, config)
    state.angle_tags = {c.target_tag for g in groups for c in g.constraints
                        if c.kind == "back_angle"}
    warnings = []
    if not shape.graph.is_connected:
        n = len(shape.graph.connected_components())
        warnings.append(f"contact graph disconnected ({n} islands); propagating per island")
        log.warning("shape '%s': %s", shape.id, warnings[-1])

    for group in groups:
        state.begin_group()
        for c in group.constraints:
            apply_constraint(c, state)
        _propagate_group(state)
        state.commit_group()

    before = _part_aabbs(shape.components, {c.id: c.samples for c in shape.components})
    after = _part_aabbs(shape.components, state.samples)

    deformed = Shape(
        id=shape.id,
        components=[Component(id=c.id, tag=c.tag, samples=state.samples[c.id],
                              proxy=state.proxies[c.id], faces=c.faces)
                    for c in shape.components],
        style_label=shape.style_label,
    )
    deformed.graph = RelationGraph(
        nodes=list(shape.graph.nodes),
        contact_edges=[Contact(comp_a=ct["a"], comp_b=ct["b"], points=ct["points"],
                               centroid=ct["centroid"])
                       for ct in state.contacts.values()],
        symmetry_edges=[SymmetryEdge(comp_a=s.comp_a, comp_b=s.comp_b,
                                     plane_point=s.plane_point, plane_normal=s.plane_normal)
                        for s in shape.graph.symmetry_edges],
    )

    conflicts = []
    for group in groups:
        for c in group.constraints:
            res = check_constraint(c, deformed)
            if res.violation > VIOLATION_TOL:
                conflicts.append({"constraint": c.to_dict(), "measured": res.measured,
                                  "violation": res.violation})

    record = DeformationRecord(
        part_aabbs={part: (before[part], after[part]) for part in before},
        component_transforms=dict(state.total),
        conflicts=conflicts,
        warnings=warnings,
    )
    return deformed, record


# ---------------------------------------------------------------------------
# Structure audits (used by tests and reports)
# ---------------------------------------------------------------------------


def contact_separations(shape: Shape, record: DeformationRecord) -> dict[tuple, float]:
    """Max distance between the two endpoints' images of each original contact."""
    out = {}
    for ct in shape.graph.contact_edges:
        ta = record.component_transforms[ct.key[0]]
        tb = record.component_transforms[ct.key[1]]
        out[ct.key] = float(np.max(np.linalg.norm(ta.apply(ct.points) - tb.apply(ct.points), axis=1)))
    return out


def symmetry_mismatches(original: Shape, deformed: Shape,
                        config: EngineConfig = DEFAULT_CONFIG) -> dict[tuple, bool]:
    """Whether each original symmetry edge still mirror-matches after deformation."""
    tol = config.graph.symmetry_tol_frac * original.diagonal
    out = {}
    for edge in original.graph.symmetry_edges:
        pa = deformed.component(edge.comp_a).proxy
        pb = deformed.component(edge.comp_b).proxy
        mirrored = mirror_proxy(pa, edge.plane_point, edge.plane_normal)
        out[(edge.comp_a, edge.comp_b)] = proxies_match(
            mirrored, pb, tol, config.graph.extent_rel_tol)
    return out
