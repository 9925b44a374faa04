"""Meridian surfaces in E^4: Gauss map, its Laplacian and pointwise 1-type classification."""

from .classify import (
    ClassificationReport,
    Tolerances,
    Verdict,
    classify,
    compute_C,
    compute_lambda,
    default_grid,
    verify_pointwise,
)
from .curves import (
    CircleCurve,
    DegenerateProfile,
    FrenetCurve,
    MeridianProfile,
    constant_f_profile,
    linear_both_profile,
    linear_f_profile,
    profile_eval,
    quadrature_g,
    sine_profile,
)
from .errors import (
    BranchBoundaryReached,
    BranchMismatch,
    ConfigError,
    DegenerateVector,
    DomainError,
    GridTooSmall,
    InvalidInitialState,
    InvariantDrift,
    LambdaVanishes,
    MeridianError,
    NotUnitSpeed,
    SingularDenominator,
    SingularProfile,
)
from .gaussmap import FrameBivector, gauss_map, laplacian_closed, laplacian_fd
from .odes import (
    OdeSolution,
    load_profile_csv,
    solve_first_kind,
    solve_fkappa_constant,
    solve_second_kind,
)
from .surface import MeridianSurface, eval_point, frame_at

__version__ = "0.1.0"
