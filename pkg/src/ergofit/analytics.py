"""Deformation energies, collection ranking, embedding and classification.

The deformation energy of a semantic part combines the relative scale
change of its axis-aligned bounding box with its center translation
normalized by the undeformed shape's bounding diagonal:

    e = prod_j |1 + |ds_j||  +  prod_j |1 + |dt_j||

so an untouched part scores exactly 2. A shape's energy is the mean over
its parts; a shape's cost vector collects that energy across avatar poses,
always deforming from the original geometry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .avatar import Avatar, ground_level, measure
from .config import DEFAULT_CONFIG, EngineConfig
from .constraints import derive_category_constraints, derive_constraints
from .geometry import Aabb
from .reshaper import DeformationRecord, propagate
from .shape import Shape

log = logging.getLogger(__name__)

POSE_ORDER = ("normal_sitting", "bench_sitting", "beach_lying", "bar_sitting")
NONE_LABEL = "none-of-the-above"
IDENTITY_ENERGY = 2.0


@dataclass(frozen=True)
class PartEnergy:
    part_tag: str
    delta_s: tuple[float, float, float]
    delta_t: tuple[float, float, float]
    e: float


def part_energy(before: Aabb, after: Aabb, shape_diag: float, part_tag: str = "") -> PartEnergy:
    """Deformation energy of one part from its bounding boxes."""
    if shape_diag <= 0:
        raise ValueError("shape diagonal must be positive")
    ext_b = before.extents
    ext_a = after.extents
    ds = np.zeros(3)
    for j in range(3):
        if ext_b[j] == 0.0:
            if ext_a[j] != 0.0:
                log.warning("part '%s': degenerate axis %d, scale change ignored", part_tag, j)
            continue
        ds[j] = ext_a[j] / ext_b[j] - 1.0
    dt = (after.center - before.center) / shape_diag
    e = float(np.prod(1.0 + np.abs(ds)) + np.prod(1.0 + np.abs(dt)))
    return PartEnergy(part_tag, tuple(ds.tolist()), tuple(dt.tolist()), e)


def shape_energy(parts: list[PartEnergy]) -> float:
    """Mean part energy (2.0 for an untouched shape)."""
    if not parts:
        raise ValueError("shape energy needs at least one part")
    return float(np.mean([p.e for p in parts]))


def record_energy(shape: Shape, record: DeformationRecord) -> tuple[float, list[PartEnergy]]:
    """Total and per-part energy of one deformation record."""
    diag = shape.diagonal
    parts = [part_energy(b, a, diag, tag) for tag, (b, a) in sorted(record.part_aabbs.items())]
    return shape_energy(parts), parts


@dataclass(frozen=True)
class CostVector:
    shape_id: str
    pose_names: tuple[str, ...]
    costs: tuple[float, ...]
    failed: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.costs) != len(self.pose_names):
            raise ValueError("one cost per pose required")

    @property
    def min_cost(self) -> float:
        return min(self.costs)

    @property
    def argmin_pose(self) -> str:
        return self.pose_names[int(np.argmin(self.costs))]


def deform_for_pose(shape: Shape, avatar: Avatar, pose_name: str,
                    config: EngineConfig = DEFAULT_CONFIG):
    """Derive constraints for a pose and propagate; returns (deformed, record, groups)."""
    posed = avatar if avatar.pose.name == pose_name else avatar.with_pose(pose_name)
    groups = derive_constraints(posed, shape, config.constraints)
    deformed, record = propagate(shape, groups, config)
    return deformed, record, groups


def cost_vector(shape: Shape, avatar: Avatar, poses=POSE_ORDER,
                config: EngineConfig = DEFAULT_CONFIG) -> CostVector:
    """Deformation cost of the shape for each pose, always from the original."""
    if not poses:
        raise ValueError("poses must be non-empty")
    costs = []
    failed = []
    for pose_name in poses:
        try:
            _, record, _ = deform_for_pose(shape, avatar, pose_name, config)
            energy, _ = record_energy(shape, record)
        except Exception as exc:  # propagation failure becomes an infinite cost
            log.warning("shape '%s' pose '%s': propagation failed (%s)", shape.id, pose_name, exc)
            energy = float("inf")
            failed.append(pose_name)
        costs.append(energy)
    return CostVector(shape.id, tuple(poses), tuple(costs), tuple(failed))


def rank(collection: list[Shape], avatar: Avatar, pose_name: str,
         config: EngineConfig = DEFAULT_CONFIG) -> list[tuple[str, float]]:
    """(shape_id, energy) ascending by energy, ties broken by id."""
    if not collection:
        raise ValueError("cannot rank an empty collection")
    entries = []
    for shape in collection:
        _, record, _ = deform_for_pose(shape, avatar, pose_name, config)
        energy, _ = record_energy(shape, record)
        entries.append((shape.id, energy))
    return sorted(entries, key=lambda kv: (kv[1], kv[0]))


# ---------------------------------------------------------------------------
# Distances and embedding
# ---------------------------------------------------------------------------


def pairwise_distance(a: CostVector, b: CostVector, metric: str = "euclidean",
                      argmin_penalty: float = 1.0) -> float:
    """Distance between two cost vectors.

    "euclidean" is the plain L2 distance of the vectors; "min-component"
    compares the minima and penalizes a best-pose mismatch.
    """
    if len(a.costs) != len(b.costs):
        raise ValueError("cost vectors must have equal length")
    if metric == "euclidean":
        return float(np.linalg.norm(np.asarray(a.costs) - np.asarray(b.costs)))
    if metric == "min-component":
        d = abs(a.min_cost - b.min_cost)
        if a.argmin_pose != b.argmin_pose:
            d += argmin_penalty
        return float(d)
    raise ValueError(f"unknown metric '{metric}'")


def distance_matrix(vectors: list[CostVector], metric: str = "euclidean",
                    argmin_penalty: float = 1.0) -> np.ndarray:
    n = len(vectors)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = pairwise_distance(vectors[i], vectors[j], metric, argmin_penalty)
    return d


@dataclass(frozen=True, eq=False)
class Embedding2D:
    ids: tuple[str, ...]
    coords: np.ndarray   # (n, 2)
    stress: float


def mds_embed(distances: np.ndarray, ids: tuple[str, ...] | None = None) -> Embedding2D:
    """Classical (double-centering) MDS into two dimensions.

    stress is the normalized residual sqrt(sum (d - d_hat)^2 / sum d^2),
    zero when the input distances are exactly realizable in the plane.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.allclose(d, d.T, atol=1e-9):
        raise ValueError("distance matrix must be symmetric")
    if np.any(d < 0) or np.any(np.abs(np.diag(d)) > 1e-12):
        raise ValueError("distances must be non-negative with a zero diagonal")
    n = d.shape[0]
    if ids is None:
        ids = tuple(str(i) for i in range(n))
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d ** 2) @ j
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1][:2]
    lam = np.maximum(evals[order], 0.0)
    coords = evecs[:, order] * np.sqrt(lam)
    for k in range(coords.shape[1]):        # deterministic sign convention
        i = int(np.argmax(np.abs(coords[:, k])))
        if coords[i, k] < 0:
            coords[:, k] = -coords[:, k]
    emb = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)
    denom = float(np.sum(d ** 2))
    stress = float(np.sqrt(np.sum((d - emb) ** 2) / denom)) if denom > 0 else 0.0
    return Embedding2D(tuple(ids), coords, stress)


# ---------------------------------------------------------------------------
# Classification and co-retrieval
# ---------------------------------------------------------------------------


def deformation_report(shape: Shape, deformed: Shape, record: DeformationRecord,
                       groups) -> dict:
    """Structured report for one deformation: constraints, energies, conflicts."""
    from .constraints import check_constraint

    energy, parts = record_energy(shape, record)
    constraints = []
    for g in groups:
        for c in g.constraints:
            res = check_constraint(c, deformed)
            constraints.append({**c.to_dict(), "group": g.name, "measured": res.measured,
                                "violation": res.violation, "satisfied": res.satisfied})
    return {
        "shape_id": shape.id,
        "total_energy": energy,
        "parts": [{"part": p.part_tag, "delta_s": list(p.delta_s),
                   "delta_t": list(p.delta_t), "e": p.e} for p in parts],
        "constraints": constraints,
        "conflicts": record.conflicts,
        "warnings": record.warnings,
    }


@dataclass(frozen=True)
class ClassificationResult:
    labels: dict[str, str]
    clusters: dict[str, tuple[str, ...]]
    threshold: float
    cost_vectors: tuple[CostVector, ...]


def outlier_threshold(vectors: list[CostVector], config: EngineConfig = DEFAULT_CONFIG) -> float:
    """Minimum-cost level beyond which a shape fits none of the poses.

    2 + max(3 * MAD of the corpus minima, a configured floor); the floor
    keeps a near-degenerate MAD from flagging ordinary shapes.
    """
    minima = np.array([v.min_cost for v in vectors if np.isfinite(v.min_cost)])
    if len(minima) == 0:
        return IDENTITY_ENERGY + config.analytics.outlier_floor
    mad = float(np.median(np.abs(minima - np.median(minima))))
    return IDENTITY_ENERGY + max(config.analytics.outlier_mad_mult * mad,
                                 config.analytics.outlier_floor)


def classify(collection: list[Shape], avatar: Avatar, poses=POSE_ORDER,
             config: EngineConfig = DEFAULT_CONFIG,
             vectors: list[CostVector] | None = None) -> ClassificationResult:
    """Label each shape with its cheapest pose, or none-of-the-above."""
    if vectors is None:
        vectors = [cost_vector(s, avatar, poses, config) for s in collection]
    threshold = outlier_threshold(vectors, config)
    labels = {}
    for v in vectors:
        labels[v.shape_id] = NONE_LABEL if v.min_cost > threshold else v.argmin_pose
    clusters = {name: tuple(v.shape_id for v in vectors if labels[v.shape_id] == name)
                for name in tuple(poses) + (NONE_LABEL,)}
    return ClassificationResult(labels, clusters, threshold, tuple(vectors))


@dataclass(frozen=True, eq=False)
class Retrieval:
    category: str
    shape_id: str
    energy: float
    deformed: Shape
    placement: np.ndarray      # world translation to apply for display
    record: DeformationRecord


def coretrieve(avatar: Avatar, pose_name: str,
               collections: list[tuple[str, list[Shape]]],
               config: EngineConfig = DEFAULT_CONFIG) -> list[Retrieval]:
    """Best-fitting object per category, deformed independently and placed.

    Categories are processed in their given order; placement follows the
    workspace layout: chair under the hips, table front edge at lower-arm
    reach, monitor standing on the table top at eye height.
    """
    posed = avatar if avatar.pose.name == pose_name else avatar.with_pose(pose_name)
    m = measure(posed)
    ground = ground_level(posed)
    hip = posed.pose.position("hip-center")
    wrist_z = max(float(posed.pose.position("wrist-l")[2]),
                  float(posed.pose.position("wrist-r")[2]))

    results: list[Retrieval] = []
    table_top_y = None
    table_center_z = None
    for category, shapes in collections:
        if not shapes:
            raise ValueError(f"co-retrieval category '{category}' is empty")
        best = None
        for shape in shapes:
            groups = derive_category_constraints(category, posed, shape, config.constraints)
            deformed, record = propagate(shape, groups, config)
            energy, _ = record_energy(shape, record)
            key = (energy, shape.id)
            if best is None or key < best[0]:
                best = (key, shape, deformed, record)
        (energy, _), shape, deformed, record = best
        floor = float(deformed.all_samples()[:, 1].min())
        box = deformed.aabb

        if category == "chair":
            seat = deformed.components_tagged("seat")[0]
            placement = np.array([hip[0] - seat.proxy.center[0], ground - floor,
                                  hip[2] - seat.proxy.center[2]])
        elif category == "table":
            placement = np.array([hip[0] - box.center[0], ground - floor,
                                  wrist_z - box.min[2]])
            table_top_y = box.max[1] + ground - floor
            table_center_z = box.center[2] + placement[2]
        elif category == "monitor":
            rest_y = table_top_y if table_top_y is not None else ground
            rest_z = table_center_z if table_center_z is not None else wrist_z + 0.3
            placement = np.array([hip[0] - box.center[0], rest_y - floor,
                                  rest_z - box.center[2]])
        else:
            placement = np.array([hip[0] - box.center[0], ground - floor, 0.0])
        results.append(Retrieval(category, shape.id, energy, deformed, placement, record))
    return results
