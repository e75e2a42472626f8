"""Tunable defaults for the whole pipeline, grouped by concern.

Every numeric threshold used anywhere in the package lives here so that
experiments can override them without touching algorithm code.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ProxyFitConfig:
    """Thresholds for the cuboid-vs-cylinder proxy classification."""

    minor_eigen_rel_tol: float = 0.15   # two minor PCA eigenvalues within 15%
    radial_cv_tol: float = 0.10         # std/mean of radial distances below 10%
    elongation_min: float = 2.0         # major eigenvalue vs mean minor eigenvalue
    min_points: int = 4


@dataclass(frozen=True)
class GraphConfig:
    """Contact and symmetry detection parameters."""

    epsilon_frac: float = 0.01      # contact epsilon, fraction of bbox diagonal
    k_max: int = 16                 # stored contact points per edge
    symmetry_tol_frac: float = 0.02  # mirrored proxy center tolerance, fraction of diagonal
    extent_rel_tol: float = 0.05    # mirrored proxy extent tolerance, relative


@dataclass(frozen=True)
class ConstraintConfig:
    """Band widths (relative) per constraint kind and the group ordering.

    All band widths sit inside the 5-15% sliding window; the seat width band
    is an absolute multiplier interval on hip width rather than a +/- band.
    """

    seat_height_band: float = 0.05
    seat_width_lo: float = 1.1
    seat_width_hi: float = 1.2
    seat_length_band: float = 0.10
    arm_height_band: float = 0.10
    back_angle_band: float = 0.05
    back_length_band: float = 0.15
    bench_occupants: int = 3
    group_order: tuple[str, ...] = ("heights", "widths", "lengths", "angles")


@dataclass(frozen=True)
class SolverConfig:
    """Least-squares transform fitting knobs."""

    scale_reg: float = 1e-6      # absolute Tikhonov pull of scales toward 1
    scale_reg_rel: float = 0.01  # leverage-relative pull (vs contact spread)
    scale_min: float = 1e-2      # positivity clamp on fitted scales
    ground_tol_frac: float = 0.01  # floor-standing test, fraction of diagonal


@dataclass(frozen=True)
class AnalyticsConfig:
    """Ranking, distance and classification parameters."""

    metric: str = "euclidean"        # or "min-component"
    argmin_penalty: float = 1.0      # min-component metric: pose-mismatch penalty
    outlier_mad_mult: float = 3.0
    outlier_floor: float = 0.25      # lower bound on the none-of-the-above margin


@dataclass(frozen=True)
class EngineConfig:
    """Aggregate configuration carried through the pipeline."""

    proxy: ProxyFitConfig = field(default_factory=ProxyFitConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    constraints: ConstraintConfig = field(default_factory=ConstraintConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    analytics: AnalyticsConfig = field(default_factory=AnalyticsConfig)


DEFAULT_CONFIG = EngineConfig()
