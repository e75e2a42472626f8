import numpy as np
import pytest

from ergofit.avatar import Avatar, measure, set_attribute
from ergofit.constraints import (
    ConstraintGroup,
    ErgonomicConstraint,
    UnsupportedShapeError,
    check_constraint,
    derive_category_constraints,
    derive_constraints,
    measure_constraint,
)
from ergofit.generator import generate_chair
from ergofit.geometry import fit_proxy
from ergofit.shape import Component, Shape, build_graph


def slab_shape(top=0.45, width=0.44, depth=0.47, tag="seat"):
    t = 0.05
    g = np.linspace(-1, 1, 7)
    pts = []
    for a in g:
        for b in g:
            pts += [[a * width / 2, top, b * depth / 2],
                    [a * width / 2, top - t, b * depth / 2],
                    [a * width / 2, top - t / 2, b * depth / 2]]
    samples = np.asarray(pts)
    comp = Component(id="c0", tag=tag, samples=samples, proxy=fit_proxy(samples))
    shape = Shape(id="slab", components=[comp])
    shape.graph = build_graph(shape)
    return shape


def find(groups, kind):
    for g in groups:
        for c in g.constraints:
            if c.kind == kind:
                return c
    return None


# -- derivation -------------------------------------------------------------------


def test_seat_width_band_from_hip_width():
    avatar = Avatar.default("normal_sitting")
    assert measure(avatar).hip_width == 0.38
    c = find(derive_constraints(avatar, slab_shape()), "seat_width")
    assert c.band[0] == pytest.approx(1.1 * 0.38)
    assert c.band[1] == pytest.approx(1.2 * 0.38)


def test_seat_height_target_is_hip_height():
    avatar = set_attribute(Avatar.default("normal_sitting"), "lower-leg", "length", 0.40)
    m = measure(avatar)
    assert m.hip_height == pytest.approx(0.45)
    c = find(derive_constraints(avatar, slab_shape()), "seat_height")
    assert c.target_value == pytest.approx(0.45)
    assert c.band == pytest.approx((0.45 * 0.95, 0.45 * 1.05))


def test_armless_shape_emits_no_arm_constraint():
    groups = derive_constraints(Avatar.default(), slab_shape())
    assert find(groups, "arm_height") is None
    assert find(groups, "back_angle") is None


def test_group_order_and_within_group_sort(corpus40):
    office = next(s for s in corpus40 if s.style_label == "office")
    groups = derive_constraints(Avatar.default(), office)
    assert [g.name for g in groups] == ["heights", "widths", "lengths", "angles"]
    heights = groups[0]
    assert [c.kind for c in heights.constraints] == ["seat_height", "arm_height"]
    lengths = groups[2]
    assert [c.kind for c in lengths.constraints] == ["seat_length", "back_length"]


def test_bench_pose_multiplies_seat_width():
    shape = slab_shape()
    single = find(derive_constraints(Avatar.default("normal_sitting"), shape), "seat_width")
    multi = find(derive_constraints(Avatar.default("bench_sitting"), shape), "seat_width")
    assert multi.band[0] == pytest.approx(3 * single.band[0])
    assert multi.band[1] == pytest.approx(3 * single.band[1])


def test_derivation_deterministic():
    shape = slab_shape()
    a = derive_constraints(Avatar.default(), shape)
    b = derive_constraints(Avatar.default(), shape)
    assert [(c.kind, c.target_value, c.band) for g in a for c in g.constraints] == \
           [(c.kind, c.target_value, c.band) for g in b for c in g.constraints]


@pytest.mark.parametrize("s", [0.7, 1.4])
def test_band_scaling_with_avatar(s, corpus40):
    office = next(sh for sh in corpus40 if sh.style_label == "office")
    base = derive_constraints(Avatar.default(), office)
    scaled = derive_constraints(Avatar.default().scaled(s), office)
    for ga, gb in zip(base, scaled):
        for ca, cb in zip(ga.constraints, gb.constraints):
            if ca.kind == "back_angle":
                assert cb.target_value == pytest.approx(ca.target_value, abs=1e-9)
            else:
                assert cb.target_value == pytest.approx(s * ca.target_value, rel=1e-9)
                assert cb.band[0] == pytest.approx(s * ca.band[0], rel=1e-9)


def test_emitted_tags_exist(corpus40):
    avatar = Avatar.default()
    for shape in corpus40[::4]:
        for g in derive_constraints(avatar, shape):
            for c in g.constraints:
                assert c.target_tag in shape.tags


def test_seatless_shape_rejected():
    shape = slab_shape(tag="base")
    with pytest.raises(UnsupportedShapeError):
        derive_constraints(Avatar.default(), shape)


# -- checking ---------------------------------------------------------------------


def test_check_inside_band():
    c = ErgonomicConstraint("seat_height", "seat", 0.45, (0.4275, 0.4725))
    res = check_constraint(c, slab_shape(top=0.45))
    assert res.satisfied and res.violation == 0.0
    assert res.measured == pytest.approx(0.45)


def test_check_violation_arithmetic():
    c = ErgonomicConstraint("seat_height", "seat", 0.45, (0.4275, 0.4725))
    res = check_constraint(c, slab_shape(top=0.50))
    assert not res.satisfied
    assert res.violation == pytest.approx(0.0275)


def test_generated_beach_chair_satisfies_beach_back_angle():
    beach = generate_chair("beach", seed=4)
    c = find(derive_constraints(Avatar.default("beach_lying"), beach), "back_angle")
    assert check_constraint(c, beach).satisfied


def test_check_missing_tag_errors():
    c = ErgonomicConstraint("back_angle", "back", 95.0, (90.25, 99.75))
    with pytest.raises(UnsupportedShapeError):
        measure_constraint(c, slab_shape())


def test_width_measured_as_lateral_extent():
    c = ErgonomicConstraint("seat_width", "seat", 0.44, (0.418, 0.456))
    res = check_constraint(c, slab_shape(width=0.44))
    assert res.measured == pytest.approx(0.44, abs=1e-9)


# -- invariants of the types ---------------------------------------------------------


def test_target_outside_band_rejected():
    with pytest.raises(ValueError):
        ErgonomicConstraint("seat_height", "seat", 0.6, (0.4, 0.5))


def test_group_membership_validated():
    c = ErgonomicConstraint("seat_width", "seat", 0.44, (0.418, 0.456))
    with pytest.raises(ValueError):
        ConstraintGroup("heights", (c,))


# -- category mappings ----------------------------------------------------------------


def test_table_category_targets_lower_arm_height():
    from ergofit.generator import generate_table
    avatar = Avatar.default("normal_sitting")
    groups = derive_category_constraints("table", avatar, generate_table(seed=1))
    [c] = [c for g in groups for c in g.constraints]
    assert c.kind == "seat_height"
    assert c.target_value == pytest.approx(measure(avatar).lower_arm_height)


def test_monitor_category_targets_eye_height_above_table():
    from ergofit.avatar import eye_height
    from ergofit.generator import generate_monitor
    avatar = Avatar.default("normal_sitting")
    groups = derive_category_constraints("monitor", avatar, generate_monitor(seed=1))
    [c] = [c for g in groups for c in g.constraints]
    assert c.target_tag == "back"
    m = measure(avatar)
    assert c.target_value == pytest.approx(eye_height(avatar) - m.lower_arm_height)
