#!/usr/bin/env python3
"""Regenerate the shipped avatar data files (default attributes, pose tables).

Poses are stored as per-bone unit directions (parent -> child), so joint
positions always satisfy the bone-length invariant for any attribute set.
Angles are chosen so that, with the default adult attributes:

    normal/bench sitting: spine-to-upper-leg 95 deg, knee 90 deg,
                          hip 0.48 m above the feet
    beach lying:          spine-to-upper-leg 145 deg, knee 160 deg,
                          hip 0.333 m above the feet
    bar sitting:          spine-to-upper-leg 95 deg, feet dangling,
                          hip 0.743 m above the toes
"""

import json
import math
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "ergofit" / "data"


def d(deg):
    return math.radians(deg)


DEFAULT_ATTRIBUTES = {
    "neck-bone": {"length": 0.10, "width": 0.12, "thickness": 0.12},
    "head-bone": {"length": 0.10, "width": 0.15, "thickness": 0.18},
    "skull-bone": {"length": 0.15, "width": 0.16, "thickness": 0.19},
    "chest-bone": {"length": 0.22, "width": 0.34, "thickness": 0.20},
    "body-bone": {"length": 0.22, "width": 0.38, "thickness": 0.22},
    "shoulder-l": {"length": 0.18, "width": 0.10, "thickness": 0.10},
    "shoulder-r": {"length": 0.18, "width": 0.10, "thickness": 0.10},
    "upper-arm-l": {"length": 0.28, "width": 0.09, "thickness": 0.09},
    "upper-arm-r": {"length": 0.28, "width": 0.09, "thickness": 0.09},
    "lower-arm-l": {"length": 0.26, "width": 0.07, "thickness": 0.07},
    "lower-arm-r": {"length": 0.26, "width": 0.07, "thickness": 0.07},
    "hip-l": {"length": 0.09, "width": 0.12, "thickness": 0.12},
    "hip-r": {"length": 0.09, "width": 0.12, "thickness": 0.12},
    "upper-leg-l": {"length": 0.45, "width": 0.14, "thickness": 0.14},
    "upper-leg-r": {"length": 0.45, "width": 0.14, "thickness": 0.14},
    "lower-leg-l": {"length": 0.43, "width": 0.11, "thickness": 0.11},
    "lower-leg-r": {"length": 0.43, "width": 0.11, "thickness": 0.11},
    "foot-l": {"length": 0.15, "width": 0.09, "thickness": 0.06},
    "foot-r": {"length": 0.15, "width": 0.09, "thickness": 0.06},
}


def both(tag, vec):
    return {f"{tag}-l": list(vec), f"{tag}-r": list(vec)}


def sitting_directions(spine_back_deg, upper_leg, lower_leg, foot, lower_arm):
    """Bone direction table for a torso leaning spine_back_deg backwards."""
    c, s = math.cos(d(spine_back_deg)), math.sin(d(spine_back_deg))
    down_spine = [0.0, -c, s]   # chest -> pelvis
    up_spine = [0.0, c, -s]     # chest -> head chain
    table = {
        "chest-bone": down_spine,
        "body-bone": down_spine,
        "neck-bone": up_spine,
        "head-bone": up_spine,
        "skull-bone": up_spine,
        "shoulder-l": [1.0, 0.0, 0.0],
        "shoulder-r": [-1.0, 0.0, 0.0],
        "hip-l": [1.0, 0.0, 0.0],
        "hip-r": [-1.0, 0.0, 0.0],
    }
    table.update(both("upper-arm", [0.0, -math.cos(d(10)), math.sin(d(10))]))
    table.update(both("lower-arm", lower_arm))
    table.update(both("upper-leg", upper_leg))
    table.update(both("lower-leg", lower_leg))
    table.update(both("foot", foot))
    return table


def chest_position(hip_height, spine_back_deg, torso=0.44):
    """Chest placed so the hip-center sits at (0, hip_height, 0)."""
    c, s = math.cos(d(spine_back_deg)), math.sin(d(spine_back_deg))
    return [0.0, hip_height + torso * c, -torso * s]


def main():
    # normal/bench: upper leg horizontal, shin vertical, heel 0.05 above toes
    foot_norm = [0.0, -1.0 / 3.0, math.sqrt(1 - 1 / 9.0)]
    sit = sitting_directions(5.0, [0.0, 0.0, 1.0], [0.0, -1.0, 0.0], foot_norm, [0.0, 0.0, 1.0])
    hip_norm = 0.43 + 0.15 / 3.0

    # beach: thigh 10 deg down, shin 30 deg down (knee 160), heel 0.04 up
    foot_beach = [0.0, -4.0 / 15.0, math.sqrt(1 - (4.0 / 15.0) ** 2)]
    beach = sitting_directions(
        45.0,
        [0.0, -math.sin(d(10)), math.cos(d(10))],
        [0.0, -math.sin(d(30)), math.cos(d(30))],
        foot_beach,
        [0.0, -math.sin(d(10)), math.cos(d(10))],
    )
    hip_beach = 0.45 * math.sin(d(10)) + 0.43 * math.sin(d(30)) + 0.15 * (4.0 / 15.0)

    # bar: perched, torso 20 deg forward, thigh 25 deg down, shin and toes hanging
    bar = sitting_directions(
        -20.0,
        [0.0, -math.sin(d(25)), math.cos(d(25))],
        [0.0, -1.0, 0.0],
        [0.0, -math.sin(d(55)), math.cos(d(55))],
        [0.0, 0.0, 1.0],
    )
    hip_bar = 0.45 * math.sin(d(25)) + 0.43 + 0.15 * math.sin(d(55))

    poses = {
        "normal_sitting": {"root_position": chest_position(hip_norm, 5.0), "directions": sit},
        "bench_sitting": {"root_position": chest_position(hip_norm, 5.0), "directions": sit},
        "beach_lying": {"root_position": chest_position(hip_beach, 45.0), "directions": beach},
        "bar_sitting": {"root_position": chest_position(hip_bar, -20.0), "directions": bar},
    }

    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "avatar_default.json").write_text(json.dumps(DEFAULT_ATTRIBUTES, indent=2, sort_keys=True))
    (DATA / "poses.json").write_text(json.dumps(poses, indent=2, sort_keys=True))
    print(f"wrote {DATA / 'avatar_default.json'}")
    print(f"wrote {DATA / 'poses.json'}")


if __name__ == "__main__":
    main()
