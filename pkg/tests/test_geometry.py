import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergofit.geometry import (
    Aabb,
    AffineTransform,
    Cylinder,
    DegenerateInputError,
    OrientedBox,
    aabb_of,
    apply_transform,
    compose,
    fit_proxy,
    mirror_points,
    mirror_proxy,
    mirrored_transform,
    transform_proxy,
)

UNIT_CUBE = np.array([[sx, sy, sz] for sx in (0, 1) for sy in (0, 1) for sz in (0, 1)], float)


def rand_transform(rng):
    m = rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(m)
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    frame_m = rng.normal(size=(3, 3))
    fq, _ = np.linalg.qr(frame_m)
    if np.linalg.det(fq) < 0:
        fq[:, 0] = -fq[:, 0]
    return AffineTransform.from_components(
        q, rng.uniform(0.3, 2.5, size=3), fq.T, rng.normal(scale=1.0, size=3))


# -- transforms --------------------------------------------------------------


def test_apply_identity():
    p = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(apply_transform(AffineTransform.identity(), p), p)


def test_apply_translation():
    t = AffineTransform.from_translation([1.0, 2.0, 3.0])
    assert np.allclose(t.apply([1.0, 1.0, 1.0]), [2.0, 3.0, 4.0])


def test_apply_axis_scale_about_origin():
    t = AffineTransform.from_scale((2.0, 1.0, 1.0))
    assert np.allclose(t.apply([1.0, 1.0, 1.0]), [2.0, 1.0, 1.0])


def test_scale_about_center_keeps_center():
    c = np.array([0.5, 1.0, -0.25])
    t = AffineTransform.from_scale((2.0, 3.0, 0.5), center=c)
    assert np.allclose(t.apply(c), c)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_compose_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rand_transform(rng) for _ in range(3))
    p = rng.normal(size=3)
    left = compose(compose(a, b), c).apply(p)
    right = compose(a, compose(b, c)).apply(p)
    assert np.allclose(left, right, atol=1e-9)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_compose_matches_sequential_application(seed):
    rng = np.random.default_rng(seed)
    a, b = rand_transform(rng), rand_transform(rng)
    p = rng.normal(size=3)
    assert np.allclose(compose(a, b).apply(p), a.apply(b.apply(p)), atol=1e-9)


def test_polar_factors_roundtrip():
    rng = np.random.default_rng(7)
    t = rand_transform(rng)
    r, s, f = t.polar_factors()
    rebuilt = r @ f.T @ np.diag(s) @ f
    assert np.allclose(rebuilt, t.linear, atol=1e-12)
    assert np.all(s > 0)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)


def test_invalid_scale_rejected():
    with pytest.raises(ValueError):
        AffineTransform.from_components(np.eye(3), (1.0, -1.0, 1.0), np.eye(3), np.zeros(3))


def test_non_orthonormal_rotation_rejected():
    bad = np.eye(3)
    bad[0, 1] = 1e-6
    with pytest.raises(ValueError):
        AffineTransform.from_components(bad, (1, 1, 1), np.eye(3), np.zeros(3))


def test_rotation_about_line_fixes_line():
    t = AffineTransform.from_rotation_about([1.0, 0.0, 0.0], 0.7, [0.0, 2.0, 3.0])
    for x in (-1.0, 0.0, 5.0):
        assert np.allclose(t.apply([x, 2.0, 3.0]), [x, 2.0, 3.0], atol=1e-12)


def test_mirrored_transform_conjugation():
    rng = np.random.default_rng(3)
    t = rand_transform(rng)
    point, normal = np.array([0.2, 0.0, 0.0]), np.array([1.0, 0.0, 0.0])
    p = rng.normal(size=3)
    lhs = mirrored_transform(t, point, normal).apply(mirror_points(p, point, normal))
    rhs = mirror_points(t.apply(p), point, normal)
    assert np.allclose(lhs, rhs, atol=1e-12)


# -- aabb ---------------------------------------------------------------------


def test_aabb_two_points():
    box = aabb_of([[0, 0, 0], [1, 2, 3]])
    assert np.array_equal(box.min, [0, 0, 0])
    assert np.array_equal(box.max, [1, 2, 3])


def test_aabb_single_point():
    box = aabb_of([[1.5, -2.0, 0.25]])
    assert np.array_equal(box.min, box.max)


def test_aabb_scaled_cube():
    t = AffineTransform.from_scale((1.5, 1.0, 1.0), center=[0.5, 0.5, 0.5])
    box = aabb_of(t.apply(UNIT_CUBE))
    assert box.extents == pytest.approx([1.5, 1.0, 1.0])


def test_aabb_empty_errors():
    with pytest.raises(DegenerateInputError):
        aabb_of(np.empty((0, 3)))


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_aabb_encloses_every_point(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(1, 40)), 3))
    box = aabb_of(pts)
    assert np.all(pts >= box.min) and np.all(pts <= box.max)


def test_aabb_min_above_max_rejected():
    with pytest.raises(ValueError):
        Aabb(np.array([1.0, 0, 0]), np.array([0.0, 1, 1]))


# -- proxy fitting -------------------------------------------------------------


def test_fit_proxy_unit_cube_corners():
    proxy = fit_proxy(UNIT_CUBE)
    assert isinstance(proxy, OrientedBox)
    assert proxy.half_extents == pytest.approx([0.5, 0.5, 0.5], abs=1e-9)
    assert np.allclose(proxy.center, [0.5, 0.5, 0.5], atol=1e-9)
    # axes equal world axes up to permutation and sign
    assert np.allclose(np.sort(np.abs(proxy.axes).max(axis=1)), [1, 1, 1], atol=1e-9)


def cylinder_surface_moments(radius, length, n_quad=4000):
    """Covariance of the uniform density on a z-aligned open cylinder surface,
    by numeric integration over its parameterization."""
    theta = np.linspace(0, 2 * np.pi, n_quad, endpoint=False)
    var_radial_x = np.mean((radius * np.cos(theta)) ** 2)
    var_radial_y = np.mean((radius * np.sin(theta)) ** 2)
    z = np.linspace(-length / 2, length / 2, n_quad)
    trapezoid = getattr(np, "trapezoid", np.trapz)
    var_axial = trapezoid(z ** 2, z) / length
    return np.diag([var_radial_x, var_radial_y, var_axial])


def test_fit_proxy_cylinder_against_surface_moment_oracle():
    # 2000 uniformly distributed surface points: 50 even rings of 40, each
    # ring rotated by the golden angle so no two rings share columns
    n_rings, n_theta = 50, 40
    golden = np.pi * (3 - np.sqrt(5))
    rows = []
    for i, z in enumerate(np.linspace(-2.0, 2.0, n_rings)):
        theta = np.arange(n_theta) * (2 * np.pi / n_theta) + i * golden
        rows.append(np.stack([np.cos(theta), np.sin(theta), np.full(n_theta, z)], axis=1))
    pts = np.vstack(rows)
    n = len(pts)
    assert n == 2000

    expected = cylinder_surface_moments(1.0, 4.0)
    centered = pts - pts.mean(axis=0)
    sample_cov = centered.T @ centered / n
    assert np.allclose(sample_cov, expected, atol=0.06)
    # the oracle's dominant eigenvector is the z axis
    evals, evecs = np.linalg.eigh(expected)
    assert np.allclose(np.abs(evecs[:, -1]), [0, 0, 1], atol=1e-12)

    proxy = fit_proxy(pts)
    assert isinstance(proxy, Cylinder)
    assert abs(np.dot(proxy.axis, [0, 0, 1])) >= np.cos(np.radians(1.0))
    assert proxy.radius == pytest.approx(1.0, rel=0.02)
    assert proxy.half_length == pytest.approx(2.0, rel=0.02)


def test_fit_proxy_coplanar_rectangle():
    pts = np.array([[x, y, 0.0] for x in np.linspace(0, 2, 9) for y in np.linspace(0, 1, 5)])
    proxy = fit_proxy(pts)
    assert isinstance(proxy, OrientedBox)
    assert proxy.half_extents[2] < 1e-9


def test_fit_proxy_rejects_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        fit_proxy(np.zeros((3, 3)))
    with pytest.raises(DegenerateInputError):
        fit_proxy(np.ones((10, 3)))


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_fit_proxy_point_order_invariance(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(60, 3)) * np.array([3.0, 1.0, 0.5])
    a = fit_proxy(pts)
    b = fit_proxy(pts[rng.permutation(60)])
    assert type(a) is type(b)
    assert np.allclose(a.center, b.center, atol=1e-9)
    if isinstance(a, OrientedBox):
        assert np.allclose(a.half_extents, b.half_extents, atol=1e-9)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_fit_proxy_volume_rigid_invariance(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(80, 3)) * np.array([2.0, 1.0, 0.4])
    m = rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(m)
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    moved = pts @ q.T + rng.normal(size=3)
    v1 = fit_proxy(pts).volume
    v2 = fit_proxy(moved).volume
    assert v2 == pytest.approx(v1, rel=1e-6)


def test_oriented_box_sorts_extents_and_validates():
    box = OrientedBox(center=np.zeros(3), axes=np.eye(3), half_extents=np.array([0.1, 0.5, 0.3]))
    assert np.all(np.diff(box.half_extents) <= 0)
    with pytest.raises(ValueError):
        OrientedBox(center=np.zeros(3), axes=np.array([[1, 0, 0], [1, 0, 0], [0, 0, 1]], float),
                    half_extents=np.ones(3))


def test_transform_proxy_scale_in_own_frame_is_exact():
    box = OrientedBox(center=np.array([1.0, 2.0, 3.0]), axes=np.eye(3),
                      half_extents=np.array([0.5, 0.4, 0.3]))
    t = AffineTransform.from_scale((2.0, 1.0, 1.0), frame=np.eye(3), center=box.center)
    out = transform_proxy(t, box)
    assert out.support_extent(np.array([1.0, 0, 0])) == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(out.center, box.center)


def test_transform_proxy_cylinder_uniform_radial():
    cyl = Cylinder(center=np.zeros(3), axis=np.array([0.0, 1.0, 0.0]), radius=0.1, half_length=0.5)
    t = AffineTransform.from_scale((1.5, 2.0, 1.5))
    out = transform_proxy(t, cyl)
    assert isinstance(out, Cylinder)
    assert out.radius == pytest.approx(0.15)
    assert out.half_length == pytest.approx(1.0)


def test_mirror_proxy_reflects_center():
    box = OrientedBox(center=np.array([1.0, 0.0, 0.0]), axes=np.eye(3), half_extents=np.ones(3))
    out = mirror_proxy(box, np.zeros(3), np.array([1.0, 0.0, 0.0]))
    assert np.allclose(out.center, [-1.0, 0.0, 0.0])
