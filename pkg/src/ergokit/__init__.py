"""ergokit: numerical experiments in ergodic population dynamics.

Three toolboxes share a small set of grid types:

- transfer operators of unimodal interval maps (invariant densities by
  the piecewise-constant matrix method, direct operator application,
  orbit averages);
- exactness certificates built from the expansion bound of the
  conjugated map, with closed-form criteria for the catalog maps;
- the chaotic linear semiflow on functions vanishing at the origin,
  its population-model reductions, and Gaussian sampling of its
  invariant measure.
"""

from .errors import (
    CalibrationError,
    ConvergenceError,
    DomainError,
    ExtinctionError,
    FactorizationError,
    InstabilityError,
    InvalidParameterError,
    KinkError,
    OrbitCollapseWarning,
    PreconditionError,
)
from .maps import (
    Branch,
    MapSpec,
    beverton_holt_map,
    cubic_map,
    logistic_map,
    make_catalog_map,
    make_custom_map,
    ricker_map,
    tent_map,
)
from .gridfn import GridFunction
from .transfer import (
    GridDensity,
    TransferMatrix,
    apply_fp,
    arcsine_bin_masses,
    arcsine_density,
    bin_density,
    birkhoff_average,
    invariant_density,
    iterate_density,
    log_slope_observable,
    ulam_matrix,
    uniform_density,
)
from .conjugacy import ConjugacyPair, conjugate_map, pushforward_density
from .certify import (
    CertificateReport,
    CurvatureBound,
    InfimumBound,
    RickerCriterion,
    cauchy_h2_bound,
    certify_exactness,
    edge_factor,
    expansion_factor,
    inf_h_product,
    peak_factor,
    ricker_criterion,
    ricker_lambda_threshold,
)
from .sampling import (
    PathSample,
    empirical_autocov,
    invariant_state_ensemble,
    invariant_state_from_path,
    ou_ensemble,
    sample_invariant_state,
    sample_levy_field,
    sample_ou,
    sample_wiener,
    stream,
)
from .semiflow import (
    ProbeResult,
    SizeStructuredConfig,
    StationarityResult,
    TurbulenceReport,
    boundary_trace,
    grid_mass,
    linear_semiflow,
    mass_near_zero,
    maturity_model_reduction,
    nonlinear_density_flow,
    normalize_density,
    sensitive_dependence_probe,
    size_structured_closed_form,
    size_structured_step,
    stationarity_test,
    turbulence_report,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "CalibrationError",
    "CertificateReport",
    "ConjugacyPair",
    "ConvergenceError",
    "CurvatureBound",
    "DomainError",
    "ExtinctionError",
    "FactorizationError",
    "GridDensity",
    "GridFunction",
    "InfimumBound",
    "InstabilityError",
    "InvalidParameterError",
    "KinkError",
    "MapSpec",
    "OrbitCollapseWarning",
    "PathSample",
    "PreconditionError",
    "ProbeResult",
    "RickerCriterion",
    "SizeStructuredConfig",
    "StationarityResult",
    "TransferMatrix",
    "TurbulenceReport",
    "apply_fp",
    "arcsine_bin_masses",
    "arcsine_density",
    "beverton_holt_map",
    "bin_density",
    "birkhoff_average",
    "boundary_trace",
    "cauchy_h2_bound",
    "certify_exactness",
    "conjugate_map",
    "cubic_map",
    "edge_factor",
    "empirical_autocov",
    "expansion_factor",
    "grid_mass",
    "inf_h_product",
    "invariant_density",
    "invariant_state_ensemble",
    "invariant_state_from_path",
    "iterate_density",
    "linear_semiflow",
    "log_slope_observable",
    "logistic_map",
    "make_catalog_map",
    "make_custom_map",
    "mass_near_zero",
    "maturity_model_reduction",
    "nonlinear_density_flow",
    "normalize_density",
    "ou_ensemble",
    "peak_factor",
    "pushforward_density",
    "ricker_criterion",
    "ricker_lambda_threshold",
    "ricker_map",
    "sample_invariant_state",
    "sample_levy_field",
    "sample_ou",
    "sample_wiener",
    "sensitive_dependence_probe",
    "size_structured_closed_form",
    "size_structured_step",
    "stationarity_test",
    "stream",
    "tent_map",
    "turbulence_report",
    "ulam_matrix",
    "uniform_density",
]
