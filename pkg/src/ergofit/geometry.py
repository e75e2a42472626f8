"""Geometry kernel: vectors, affine transforms, bounding volumes, proxy fitting.

Points are numpy float64 arrays; a single point has shape (3,), a point set
has shape (n, 3). All lengths are meters, world axes are x lateral,
y up, z front.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import ProxyFitConfig

Vec3 = np.ndarray

ORTHO_TOL = 1e-9


class DegenerateInputError(ValueError):
    """Raised when an operation receives too few or collapsed points."""


def vec3(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


def as_points(points) -> np.ndarray:
    """Coerce a point list to an (n, 3) float array, validating finiteness."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DegenerateInputError(f"expected (n, 3) points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DegenerateInputError("points contain non-finite components")
    return arr


def _orthonormalize(m: np.ndarray) -> np.ndarray:
    """Nearest right-handed orthonormal basis to the rows of m (Gram-Schmidt)."""
    a = m[0] / np.linalg.norm(m[0])
    b = m[1] - np.dot(m[1], a) * a
    b = b / np.linalg.norm(b)
    c = np.cross(a, b)
    return np.stack([a, b, c])


@dataclass(frozen=True, eq=False)
class AffineTransform:
    """Affine map p -> linear @ p + translation.

    The linear part always has positive determinant and factors (via polar
    decomposition) into rotation @ scale, where the scale is per-axis in an
    explicit orthonormal frame. Construct through the classmethods, which
    validate the factors they are given.
    """

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "linear", np.asarray(self.linear, dtype=float).reshape(3, 3))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float).reshape(3))
        if np.linalg.det(self.linear) <= 0:
            raise ValueError("linear part must have positive determinant")

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls) -> "AffineTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_translation(cls, d) -> "AffineTransform":
        return cls(np.eye(3), np.asarray(d, dtype=float))

    @classmethod
    def from_components(cls, rotation, scale, frame, translation, center=None) -> "AffineTransform":
        """rotation @ (frame' diag(scale) frame) about center, then translation.

        `frame` holds the scale axes as rows; `scale` must be positive;
        `rotation` must be orthonormal within 1e-9.
        """
        rotation = np.asarray(rotation, dtype=float)
        frame = np.asarray(frame, dtype=float)
        scale = np.asarray(scale, dtype=float).reshape(3)
        if np.any(scale <= 0):
            raise ValueError(f"scale factors must be positive, got {scale}")
        for name, m in (("rotation", rotation), ("frame", frame)):
            if np.max(np.abs(m @ m.T - np.eye(3))) > ORTHO_TOL:
                raise ValueError(f"{name} is not orthonormal within {ORTHO_TOL}")
        linear = rotation @ frame.T @ np.diag(scale) @ frame
        t = np.asarray(translation, dtype=float)
        if center is not None:
            center = np.asarray(center, dtype=float)
            t = t + center - linear @ center
        return cls(linear, t)

    @classmethod
    def from_scale(cls, scale, frame=None, center=None) -> "AffineTransform":
        frame = np.eye(3) if frame is None else frame
        return cls.from_components(np.eye(3), scale, frame, np.zeros(3), center)

    @classmethod
    def from_rotation_about(cls, axis, angle_rad, point) -> "AffineTransform":
        """Rotation by angle_rad about the line through `point` along `axis`."""
        axis = np.asarray(axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        c, s = np.cos(angle_rad), np.sin(angle_rad)
        k = np.array([
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ])
        rot = np.eye(3) * c + s * k + (1 - c) * np.outer(axis, axis)
        point = np.asarray(point, dtype=float)
        return cls(rot, point - rot @ point)

    # -- factored view ------------------------------------------------------

    def polar_factors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(rotation, scale, frame) with linear = R @ frame' diag(s) frame.

        det(linear) > 0 guarantees the rotation comes out proper and the
        scales positive.
        """
        u, sv, vt = np.linalg.svd(self.linear)
        return u @ vt, sv, vt

    @property
    def rotation(self) -> np.ndarray:
        return self.polar_factors()[0]

    @property
    def scale_factors(self) -> np.ndarray:
        return self.polar_factors()[1]

    @property
    def scale_frame(self) -> np.ndarray:
        return self.polar_factors()[2]

    @property
    def is_identity(self) -> bool:
        return np.array_equal(self.linear, np.eye(3)) and not self.translation.any()

    # -- application --------------------------------------------------------

    def apply(self, points) -> np.ndarray:
        """Transform one point or an (n, 3) set. Identity returns its input."""
        pts = np.asarray(points, dtype=float)
        if self.is_identity:
            return pts
        return pts @ self.linear.T + self.translation

    def compose(self, other: "AffineTransform") -> "AffineTransform":
        """self after other: (self.compose(other))(p) == self(other(p))."""
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        return AffineTransform(self.linear @ other.linear,
                               self.linear @ other.translation + self.translation)


def compose(a: AffineTransform, b: AffineTransform) -> AffineTransform:
    return a.compose(b)


def apply_transform(t: AffineTransform, p) -> np.ndarray:
    return t.apply(p)


def reflection(point, normal) -> AffineTransform:
    """Mirror across the plane through `point` with unit `normal`.

    Not an AffineTransform (determinant -1), so returned as raw factors.
    """
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    lin = np.eye(3) - 2.0 * np.outer(normal, normal)
    point = np.asarray(point, dtype=float)
    return lin, point - lin @ point


def mirrored_transform(t: AffineTransform, point, normal) -> AffineTransform:
    """Conjugate t by the reflection across (point, normal): M o t o M."""
    lin, off = reflection(point, normal)
    linear = lin @ t.linear @ lin
    translation = lin @ (t.linear @ off + t.translation) + off
    return AffineTransform(linear, translation)


def mirror_points(points, point, normal) -> np.ndarray:
    lin, off = reflection(point, normal)
    return np.asarray(points, dtype=float) @ lin.T + off


# ---------------------------------------------------------------------------
# Bounding volumes and proxies
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Aabb:
    """Axis-aligned box, min <= max componentwise."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "min", np.asarray(self.min, dtype=float).reshape(3))
        object.__setattr__(self, "max", np.asarray(self.max, dtype=float).reshape(3))
        if np.any(self.min > self.max):
            raise ValueError("aabb min exceeds max")

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.min + self.max)

    @property
    def extents(self) -> np.ndarray:
        return self.max - self.min

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.extents))

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(np.minimum(self.min, other.min), np.maximum(self.max, other.max))


def aabb_of(points) -> Aabb:
    """Tight axis-aligned bounding box of at least one point."""
    pts = as_points(points)
    if len(pts) == 0:
        raise DegenerateInputError("aabb_of requires at least one point")
    return Aabb(pts.min(axis=0), pts.max(axis=0))


@dataclass(frozen=True, eq=False)
class OrientedBox:
    """Oriented cuboid: rows of `axes` are unit directions, extents sorted descending."""

    center: np.ndarray
    axes: np.ndarray
    half_extents: np.ndarray

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(3)
        axes = np.asarray(self.axes, dtype=float).reshape(3, 3)
        h = np.asarray(self.half_extents, dtype=float).reshape(3)
        if np.max(np.abs(axes @ axes.T - np.eye(3))) > ORTHO_TOL:
            raise ValueError("box axes are not orthonormal within 1e-9")
        if np.any(h < 0):
            raise ValueError("half extents must be non-negative")
        # axes stored as given (sorted) so serialization round-trips bit-exactly
        order = np.argsort(-h, kind="stable")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "axes", axes[order])
        object.__setattr__(self, "half_extents", h[order])

    def support_extent(self, direction) -> float:
        """Total extent of the box projected on a unit direction."""
        d = np.asarray(direction, dtype=float)
        return float(2.0 * np.sum(self.half_extents * np.abs(self.axes @ d)))

    def top_height(self) -> float:
        """World height of the upward-most face."""
        up = np.array([0.0, 1.0, 0.0])
        return float(self.center[1] + np.sum(self.half_extents * np.abs(self.axes @ up)))

    @property
    def volume(self) -> float:
        return float(8.0 * np.prod(self.half_extents))

    def corners(self) -> np.ndarray:
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float)
        return self.center + (signs * self.half_extents) @ self.axes


@dataclass(frozen=True, eq=False)
class Cylinder:
    """Capped cylinder proxy along a unit axis."""

    center: np.ndarray
    axis: np.ndarray
    radius: float
    half_length: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(3)
        axis = np.asarray(self.axis, dtype=float).reshape(3)
        n = np.linalg.norm(axis)
        if n == 0:
            raise ValueError("cylinder axis must be non-zero")
        if self.radius <= 0 or self.half_length <= 0:
            raise ValueError("cylinder radius and half_length must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "axis", axis / n)

    def support_extent(self, direction) -> float:
        d = np.asarray(direction, dtype=float)
        along = abs(float(np.dot(self.axis, d)))
        radial = np.sqrt(max(0.0, 1.0 - along * along))
        return 2.0 * (self.half_length * along + self.radius * radial)

    def top_height(self) -> float:
        up = np.array([0.0, 1.0, 0.0])
        along = abs(float(self.axis[1]))
        radial = np.sqrt(max(0.0, 1.0 - along * along))
        return float(self.center[1] + self.half_length * along + self.radius * radial)

    @property
    def volume(self) -> float:
        return float(np.pi * self.radius ** 2 * 2.0 * self.half_length)


Proxy = Union[OrientedBox, Cylinder]


def proxy_support_extent(proxy: Proxy, direction) -> float:
    return proxy.support_extent(direction)


def _pca_frame(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Centroid, eigenvalues (descending) and eigenvector rows of the covariance."""
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    cov = centered.T @ centered / len(pts)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    axes = evecs[:, order].T
    # deterministic sign: dominant component of each axis made positive
    for i in range(3):
        j = int(np.argmax(np.abs(axes[i])))
        if axes[i, j] < 0:
            axes[i] = -axes[i]
    if np.linalg.det(axes) < 0:
        axes[2] = -axes[2]
    return centroid, evals, axes


def fit_proxy(points, config: ProxyFitConfig = ProxyFitConfig()) -> Proxy:
    """Fit a PCA-aligned cuboid, or a cylinder when the point cloud is one.

    The cylinder test requires (a) the two minor covariance eigenvalues to
    agree within `minor_eigen_rel_tol`, (b) the radial spread about the major
    axis to be below `radial_cv_tol` of the mean radius, and (c) the cloud to
    be elongated (major eigenvalue at least `elongation_min` times the mean
    minor one). The elongation guard keeps rotation-symmetric but compact
    clouds, e.g. cube corners, classified as cuboids.
    """
    pts = as_points(points)
    if len(pts) < config.min_points:
        raise DegenerateInputError(f"proxy fitting needs >= {config.min_points} points, got {len(pts)}")
    if np.allclose(pts, pts[0], atol=1e-12):
        raise DegenerateInputError("proxy fitting needs non-coincident points")

    centroid, evals, axes = _pca_frame(pts)

    lam1, lam2, lam3 = (float(v) for v in evals)
    minor_mean = 0.5 * (lam2 + lam3)
    if minor_mean > 0:
        minor_rel = (lam2 - lam3) / max(lam2, 1e-30)
        elongated = lam1 >= config.elongation_min * minor_mean
        if minor_rel < config.minor_eigen_rel_tol and elongated:
            axis = axes[0]
            along = (pts - centroid) @ axis
            radial_vec = pts - centroid - np.outer(along, axis)
            radial = np.linalg.norm(radial_vec, axis=1)
            mean_r = float(radial.mean())
            if mean_r > 0 and float(radial.std()) / mean_r < config.radial_cv_tol:
                lo, hi = float(along.min()), float(along.max())
                center = centroid + 0.5 * (lo + hi) * axis
                return Cylinder(center=center, axis=axis,
                                radius=float(radial.max()),
                                half_length=0.5 * (hi - lo))

    proj = (pts - centroid) @ axes.T
    lo = proj.min(axis=0)
    hi = proj.max(axis=0)
    center = centroid + 0.5 * (lo + hi) @ axes
    return OrientedBox(center=center, axes=axes, half_extents=0.5 * (hi - lo))


def transform_proxy(t: AffineTransform, proxy: Proxy) -> Proxy:
    """Image of a proxy under t, staying within the proxy vocabulary.

    Exact when t scales along the proxy's own axes (the fitting default);
    for general linear parts the box axes are re-orthonormalized, which is
    the closest cuboid to the sheared image.
    """
    if t.is_identity:
        return proxy
    if isinstance(proxy, Cylinder):
        new_axis_raw = t.linear @ proxy.axis
        axis_scale = float(np.linalg.norm(new_axis_raw))
        # radial scale from two perpendicular directions, averaged
        n1 = _perpendicular(proxy.axis)
        n2 = np.cross(proxy.axis, n1)
        r_scale = 0.5 * (np.linalg.norm(t.linear @ n1) + np.linalg.norm(t.linear @ n2))
        return Cylinder(center=t.apply(proxy.center),
                        axis=new_axis_raw / axis_scale,
                        radius=proxy.radius * r_scale,
                        half_length=proxy.half_length * axis_scale)
    imgs = (t.linear @ proxy.axes.T).T
    norms = np.linalg.norm(imgs, axis=1)
    return OrientedBox(center=t.apply(proxy.center),
                       axes=_orthonormalize(imgs / norms[:, None]),
                       half_extents=proxy.half_extents * norms)


def _perpendicular(v: np.ndarray) -> np.ndarray:
    """Any unit vector perpendicular to unit v."""
    ref = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    p = np.cross(v, ref)
    return p / np.linalg.norm(p)


def mirror_proxy(proxy: Proxy, point, normal) -> Proxy:
    """Reflect a proxy across a plane, staying within the proxy vocabulary."""
    lin, off = reflection(point, normal)
    if isinstance(proxy, Cylinder):
        return Cylinder(center=lin @ proxy.center + off, axis=lin @ proxy.axis,
                        radius=proxy.radius, half_length=proxy.half_length)
    axes = (lin @ proxy.axes.T).T
    if np.linalg.det(axes) < 0:
        axes = axes.copy()
        axes[2] = -axes[2]
    return OrientedBox(center=lin @ proxy.center + off, axes=axes,
                       half_extents=proxy.half_extents)


def proxies_match(a: Proxy, b: Proxy, center_tol: float, extent_rel_tol: float) -> bool:
    """True when two proxies agree in placement and size within tolerances.

    Orientation is compared through axis-aligned support extents, which is
    stable under the sign/permutation freedom of fitted frames.
    """
    if type(a) is not type(b):
        return False
    if float(np.linalg.norm(a.center - b.center)) > center_tol:
        return False
    dirs = np.eye(3)
    ea = np.array([a.support_extent(d) for d in dirs])
    eb = np.array([b.support_extent(d) for d in dirs])
    scale = np.maximum(np.maximum(ea, eb), 1e-9)
    return bool(np.all(np.abs(ea - eb) / scale <= extent_rel_tol))
