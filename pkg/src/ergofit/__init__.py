"""Ergonomics-driven reshaping, ranking and exploration of part-based shapes."""

from .analytics import (
    CostVector,
    Embedding2D,
    PartEnergy,
    classify,
    coretrieve,
    cost_vector,
    mds_embed,
    pairwise_distance,
    part_energy,
    rank,
    shape_energy,
)
from .avatar import (
    Avatar,
    BodyMeasurements,
    Camera,
    Pose,
    drag_joint,
    measure,
    preset_pose,
    set_attribute,
)
from .config import DEFAULT_CONFIG, EngineConfig
from .constraints import (
    ConstraintGroup,
    ErgonomicConstraint,
    check_constraint,
    derive_constraints,
)
from .generator import ChairParams, generate_chair, generate_corpus
from .geometry import (
    Aabb,
    AffineTransform,
    Cylinder,
    OrientedBox,
    aabb_of,
    apply_transform,
    fit_proxy,
)
from .reshaper import TransformClass, fit_contact_transform, propagate
from .shape import (
    Component,
    Contact,
    RelationGraph,
    Shape,
    SymmetryEdge,
    build_graph,
    detect_contacts,
    detect_symmetries,
    load_shape,
    save_shape,
)

__version__ = "0.1.0"
