"""Right-invariant Sobolev H^k geometry on the circle diffeomorphism group.

Pseudo-spectral periodic fields, circle diffeomorphisms, the metric
operators, geodesic flow with conservation diagnostics, the Riemannian
exponential/logarithm pair, parallel transport and length experiments,
and the degenerate L2 case solved by characteristics.
"""

from .burgers import (
    CharacteristicSolution,
    blowup_time,
    characteristics_solve,
    detect_blowup_time,
    evaluate_solution,
    exp_c1_failure_probe,
    flow_map_k0,
)
from .diffeo import (
    CircleDiffeo,
    compose,
    identity_diffeo,
    invert,
    jacobian,
    right_translate,
    rotation,
)
from .errors import (
    BlowupError,
    ConfigError,
    DegenerateDiffeoError,
    GeoflowError,
    GridMismatchError,
    InversionError,
    LogConvergenceError,
    PastBlowupError,
    PathResolutionError,
)
from .explog import ExpConfig, LogResult, d_exp, riemann_exp, riemann_log
from .geodesic import (
    GeodesicState,
    SolverConfig,
    Trajectory,
    energy,
    euler_rhs,
    integrate_geodesic,
    lie_exponential,
    mform_rhs,
    momentum,
)
from .operators import bilinear_B, lie_bracket, q_operator, theta_operator
from .spectral import (
    GridSpec,
    PeriodicField,
    apply_inertia,
    dealias,
    derivative,
    evaluate_at,
    inner_k,
    invert_inertia,
    multiply,
    norm_k,
    random_band_limited,
    sup_norm,
)
from .transport import (
    MinimizationReport,
    PathOnGroup,
    curve_length,
    derivation_along_curve,
    minimization_experiment,
    parallel_transport,
    path_consistency_error,
    polar_coordinates,
)

__all__ = [
    "BlowupError",
    "CharacteristicSolution",
    "CircleDiffeo",
    "ConfigError",
    "DegenerateDiffeoError",
    "ExpConfig",
    "GeoflowError",
    "GeodesicState",
    "GridMismatchError",
    "GridSpec",
    "InversionError",
    "LogConvergenceError",
    "LogResult",
    "MinimizationReport",
    "PastBlowupError",
    "PathOnGroup",
    "PathResolutionError",
    "PeriodicField",
    "SolverConfig",
    "Trajectory",
    "apply_inertia",
    "bilinear_B",
    "blowup_time",
    "characteristics_solve",
    "compose",
    "curve_length",
    "d_exp",
    "dealias",
    "derivation_along_curve",
    "derivative",
    "detect_blowup_time",
    "energy",
    "euler_rhs",
    "evaluate_at",
    "evaluate_solution",
    "exp_c1_failure_probe",
    "flow_map_k0",
    "identity_diffeo",
    "inner_k",
    "integrate_geodesic",
    "invert",
    "invert_inertia",
    "jacobian",
    "lie_bracket",
    "lie_exponential",
    "mform_rhs",
    "minimization_experiment",
    "momentum",
    "multiply",
    "norm_k",
    "parallel_transport",
    "path_consistency_error",
    "polar_coordinates",
    "q_operator",
    "random_band_limited",
    "right_translate",
    "riemann_exp",
    "riemann_log",
    "rotation",
    "sup_norm",
    "theta_operator",
]
