"""Part-based shape representation and its spatial relation graph.

A shape is a set of tagged components, each carrying surface sample points
and a fitted proxy. Contacts (shared surface regions) and bilateral
symmetries between components form the relation graph that drives
deformation propagation.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .config import GraphConfig, ProxyFitConfig
from .geometry import (
    Aabb,
    Cylinder,
    OrientedBox,
    Proxy,
    aabb_of,
    as_points,
    fit_proxy,
    mirror_proxy,
    proxies_match,
)

log = logging.getLogger(__name__)

COMPONENT_TAGS = ("seat", "back", "arm", "leg", "base", "headrest", "other")


class ShapeFormatError(ValueError):
    """Malformed shape document; the message names the offending field."""


@dataclass(eq=False)
class Component:
    id: str
    tag: str
    samples: np.ndarray                  # (n, 3) surface points
    proxy: Proxy
    faces: list[list[int]] | None = None  # display only

    def __post_init__(self):
        self.samples = as_points(self.samples)
        if len(self.samples) < 4:
            raise ShapeFormatError(f"component '{self.id}': needs >= 4 samples")
        if self.tag not in COMPONENT_TAGS:
            raise ShapeFormatError(f"component '{self.id}': unknown tag '{self.tag}'")

    @property
    def aabb(self) -> Aabb:
        return aabb_of(self.samples)


@dataclass(eq=False)
class Contact:
    comp_a: str
    comp_b: str
    points: np.ndarray    # subsampled shared region, (k, 3)
    centroid: np.ndarray  # exact centroid of the full region

    def __post_init__(self):
        if self.comp_a == self.comp_b:
            raise ValueError("contact endpoints must differ")
        self.points = as_points(self.points)
        self.centroid = np.asarray(self.centroid, dtype=float).reshape(3)

    @property
    def key(self) -> tuple[str, str]:
        return tuple(sorted((self.comp_a, self.comp_b)))

    def other(self, comp_id: str) -> str:
        return self.comp_b if comp_id == self.comp_a else self.comp_a


@dataclass(eq=False)
class SymmetryEdge:
    comp_a: str
    comp_b: str            # may equal comp_a for self-symmetric parts
    plane_point: np.ndarray
    plane_normal: np.ndarray

    def __post_init__(self):
        self.plane_point = np.asarray(self.plane_point, dtype=float).reshape(3)
        n = np.asarray(self.plane_normal, dtype=float).reshape(3)
        self.plane_normal = n / np.linalg.norm(n)


@dataclass(eq=False)
class RelationGraph:
    nodes: list[str]
    contact_edges: list[Contact] = field(default_factory=list)
    symmetry_edges: list[SymmetryEdge] = field(default_factory=list)

    def neighbors(self, comp_id: str) -> list[str]:
        out = []
        for c in self.contact_edges:
            if c.comp_a == comp_id:
                out.append(c.comp_b)
            elif c.comp_b == comp_id:
                out.append(c.comp_a)
        return out

    def contacts_of(self, comp_id: str) -> list[Contact]:
        return [c for c in self.contact_edges if comp_id in (c.comp_a, c.comp_b)]

    def symmetry_partners(self, comp_id: str) -> list[str]:
        out = []
        for s in self.symmetry_edges:
            if s.comp_a == comp_id and s.comp_b != comp_id:
                out.append(s.comp_b)
            elif s.comp_b == comp_id and s.comp_a != comp_id:
                out.append(s.comp_a)
        return out

    def connected_components(self) -> list[set[str]]:
        """Islands of the contact graph (symmetry edges do not connect)."""
        remaining = set(self.nodes)
        islands = []
        while remaining:
            seed = min(remaining)
            stack = [seed]
            island = {seed}
            while stack:
                for nb in self.neighbors(stack.pop()):
                    if nb not in island:
                        island.add(nb)
                        stack.append(nb)
            islands.append(island)
            remaining -= island
        return islands

    @property
    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1


@dataclass(eq=False)
class Shape:
    id: str
    components: list[Component]
    graph: RelationGraph | None = None
    style_label: str | None = None

    def __post_init__(self):
        seen = set()
        for c in self.components:
            if c.id in seen:
                raise ShapeFormatError(f"duplicate component id '{c.id}'")
            seen.add(c.id)

    def component(self, comp_id: str) -> Component:
        for c in self.components:
            if c.id == comp_id:
                return c
        raise KeyError(comp_id)

    def components_tagged(self, tag: str) -> list[Component]:
        return [c for c in self.components if c.tag == tag]

    @property
    def tags(self) -> set[str]:
        return {c.tag for c in self.components}

    def all_samples(self) -> np.ndarray:
        return np.vstack([c.samples for c in self.components])

    @property
    def aabb(self) -> Aabb:
        return aabb_of(self.all_samples())

    @property
    def diagonal(self) -> float:
        return self.aabb.diagonal

    def default_epsilon(self, config: GraphConfig = GraphConfig()) -> float:
        return config.epsilon_frac * self.diagonal


# ---------------------------------------------------------------------------
# Relation detection
# ---------------------------------------------------------------------------


def detect_contacts(shape: Shape, epsilon: float, k_max: int = GraphConfig.k_max) -> list[Contact]:
    """Contacts between every component pair with samples within epsilon.

    The stored point set is the union of both components' qualifying samples,
    subsampled to k_max; the centroid stays exact over the full set.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    comps = sorted(shape.components, key=lambda c: c.id)
    trees = {c.id: cKDTree(c.samples) for c in comps}
    contacts = []
    for i, a in enumerate(comps):
        for b in comps[i + 1:]:
            da, _ = trees[b.id].query(a.samples, k=1, distance_upper_bound=epsilon * (1 + 1e-12))
            db, _ = trees[a.id].query(b.samples, k=1, distance_upper_bound=epsilon * (1 + 1e-12))
            pa = a.samples[da <= epsilon]
            pb = b.samples[db <= epsilon]
            if len(pa) == 0 and len(pb) == 0:
                continue
            full = np.vstack([p for p in (pa, pb) if len(p)])
            if len(full) > k_max:
                idx = np.unique(np.linspace(0, len(full) - 1, k_max).round().astype(int))
                pts = full[idx]
            else:
                pts = full
            contacts.append(Contact(comp_a=a.id, comp_b=b.id, points=pts,
                                    centroid=full.mean(axis=0)))
    return contacts


def bilateral_plane(shape: Shape) -> tuple[np.ndarray, np.ndarray]:
    """The shape's dominant mirror plane: x = centroid-x (shapes are pre-aligned)."""
    centroid = shape.all_samples().mean(axis=0)
    return np.array([centroid[0], 0.0, 0.0]), np.array([1.0, 0.0, 0.0])


def detect_symmetries(shape: Shape, tolerance: float,
                      extent_rel_tol: float = GraphConfig.extent_rel_tol) -> list[SymmetryEdge]:
    """Component pairs whose proxies mirror-match across the bilateral plane."""
    point, normal = bilateral_plane(shape)
    comps = sorted(shape.components, key=lambda c: c.id)
    edges = []
    for i, a in enumerate(comps):
        mirrored = mirror_proxy(a.proxy, point, normal)
        for b in comps[i:]:
            if proxies_match(mirrored, b.proxy, tolerance, extent_rel_tol):
                edges.append(SymmetryEdge(comp_a=a.id, comp_b=b.id,
                                          plane_point=point, plane_normal=normal))
                break  # one partner per component
    return edges


def build_graph(shape: Shape, epsilon: float | None = None,
                config: GraphConfig = GraphConfig()) -> RelationGraph:
    """Assemble the relation graph; warns when the contact graph is disconnected."""
    if epsilon is None:
        epsilon = config.epsilon_frac * shape.diagonal
    graph = RelationGraph(
        nodes=[c.id for c in shape.components],
        contact_edges=detect_contacts(shape, epsilon, config.k_max),
        symmetry_edges=detect_symmetries(shape, config.symmetry_tol_frac * shape.diagonal,
                                         config.extent_rel_tol),
    )
    if not graph.is_connected:
        log.warning("shape '%s': contact graph is disconnected (%d islands)",
                    shape.id, len(graph.connected_components()))
    return graph


# ---------------------------------------------------------------------------
# Serialization (structured text, one JSON document per shape)
# ---------------------------------------------------------------------------


def proxy_to_dict(proxy: Proxy) -> dict:
    if isinstance(proxy, Cylinder):
        return {"kind": "cylinder", "center": proxy.center.tolist(),
                "axis": proxy.axis.tolist(), "radius": proxy.radius,
                "half_length": proxy.half_length}
    return {"kind": "cuboid", "center": proxy.center.tolist(),
            "axes": proxy.axes.tolist(), "half_extents": proxy.half_extents.tolist()}


def proxy_from_dict(doc: dict) -> Proxy:
    kind = doc.get("kind")
    if kind == "cylinder":
        return Cylinder(center=np.array(doc["center"], dtype=float),
                        axis=np.array(doc["axis"], dtype=float),
                        radius=float(doc["radius"]),
                        half_length=float(doc["half_length"]))
    if kind == "cuboid":
        return OrientedBox(center=np.array(doc["center"], dtype=float),
                           axes=np.array(doc["axes"], dtype=float),
                           half_extents=np.array(doc["half_extents"], dtype=float))
    raise ShapeFormatError(f"proxy.kind: unknown value '{kind}'")


def shape_to_dict(shape: Shape) -> dict:
    doc = {
        "id": shape.id,
        "up_axis": "y",
        "lateral_axis": "x",
        "components": [
            {
                "id": c.id,
                "tag": c.tag,
                "samples": c.samples.tolist(),
                **({"faces": c.faces} if c.faces is not None else {}),
                "proxy": proxy_to_dict(c.proxy),
            }
            for c in shape.components
        ],
    }
    if shape.style_label is not None:
        doc["style_label"] = shape.style_label
    return doc


def shape_from_dict(doc: dict, epsilon: float | None = None,
                    graph_config: GraphConfig = GraphConfig(),
                    proxy_config: ProxyFitConfig = ProxyFitConfig(),
                    build: bool = True) -> Shape:
    if not isinstance(doc, dict):
        raise ShapeFormatError("document: expected a JSON object")
    if "id" not in doc or not isinstance(doc["id"], str):
        raise ShapeFormatError("id: missing or not a string")
    if doc.get("up_axis", "y") != "y":
        raise ShapeFormatError("up_axis: only 'y' is supported")
    if doc.get("lateral_axis", "x") != "x":
        raise ShapeFormatError("lateral_axis: only 'x' is supported")
    comps_doc = doc.get("components")
    if not isinstance(comps_doc, list) or not comps_doc:
        raise ShapeFormatError("components: missing or empty")

    components = []
    seen = set()
    for i, cd in enumerate(comps_doc):
        cid = cd.get("id")
        if not isinstance(cid, str) or not cid:
            raise ShapeFormatError(f"components[{i}].id: missing or not a string")
        if cid in seen:
            raise ShapeFormatError(f"components[{i}].id: duplicate component id '{cid}'")
        seen.add(cid)
        tag = cd.get("tag")
        if tag not in COMPONENT_TAGS:
            raise ShapeFormatError(f"components[{i}].tag: unknown tag '{tag}'")
        try:
            samples = as_points(cd.get("samples"))
        except (ValueError, TypeError) as exc:
            raise ShapeFormatError(f"components[{i}].samples: {exc}") from exc
        if len(samples) < 4:
            raise ShapeFormatError(f"components[{i}].samples: needs >= 4 points")
        faces = cd.get("faces")
        if faces is not None:
            if not all(isinstance(f, list) and len(f) == 3 for f in faces):
                raise ShapeFormatError(f"components[{i}].faces: expected index triples")
        proxy = proxy_from_dict(cd["proxy"]) if "proxy" in cd else fit_proxy(samples, proxy_config)
        components.append(Component(id=cid, tag=tag, samples=samples, proxy=proxy, faces=faces))

    label = doc.get("style_label")
    if label is not None and not isinstance(label, str):
        raise ShapeFormatError("style_label: expected a string")
    shape = Shape(id=doc["id"], components=components, style_label=label)
    if build:
        shape.graph = build_graph(shape, epsilon, graph_config)
    return shape


def save_shape(shape: Shape, path: str | Path) -> None:
    Path(path).write_text(dumps_shape(shape))


def dumps_shape(shape: Shape) -> str:
    return json.dumps(shape_to_dict(shape), sort_keys=True)


def load_shape(path: str | Path, epsilon: float | None = None, **kw) -> Shape:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ShapeFormatError(f"document: invalid JSON ({exc})") from exc
    return shape_from_dict(doc, epsilon, **kw)


def load_collection(directory: str | Path, epsilon: float | None = None) -> list[Shape]:
    """All *.json shapes in a directory, ordered by filename."""
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise ShapeFormatError(f"no shape files found in {directory}")
    return [load_shape(p, epsilon) for p in paths]
