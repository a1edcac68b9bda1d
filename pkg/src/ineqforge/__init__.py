"""Rate-function certificates for Gibbs measures, with a spectral oracle."""

__version__ = "0.1.0"

from .baseline import (
    BaselineBeta,
    bord_beta,
    lebesgue_baseline,
    lebesgue_beta,
    nash_constant,
    neumann_kernel_sup,
    optimized_nash_constant,
)
from .certificates import (
    Certificate,
    RateFunction,
    alpha_general,
    alpha_levelset,
    alpha_route_one,
    alpha_route_two,
    beta_distance,
    beta_logdensity,
    certificate_from_dict,
    certificate_to_dict,
    certify_distance,
    certify_levelset,
    certify_logdensity,
    certify_route_one,
    certify_route_two,
    classify,
)
from .conversions import (
    FSobDescriptor,
    beta_from_fsob,
    detect_dlsi,
    fsob_from_beta,
    rothaus_tighten,
    xi_from_beta,
)
from .errors import (
    CasePremiseUnchecked,
    IneqForgeError,
    ModeMismatch,
    NoWitnessFound,
    NotInvertible,
    SingularOrigin,
    SolverFailure,
    TailMassTooLarge,
    UnboundedBelow,
    XiDiverges,
)
from .geometry import (
    BALLS_METRIC,
    GeometryProfile,
    SetFamily,
    V_LEVELS_LEVEL,
    V_LEVELS_METRIC,
    build_profile,
    envelope_profile,
    phi_inf,
)
from .lyapunov import (
    DriftReport,
    ExpAV,
    ExpDist,
    LyapunovWitness,
    PhiForm,
    check_curvature_growth,
    check_drift_condition,
    drift_ratio,
    fit_witness,
    make_witness,
)
from .potential import (
    EvalResult,
    PotentialSpec,
    curvature_lower_bound,
    double_well,
    evaluate,
    gaussian,
    normalizing_constant,
    power,
    spec_from_dict,
    spec_to_dict,
    sum_of,
)
from .verify import (
    DiscreteModel,
    GapResult,
    SoundnessReport,
    TestBattery,
    build_battery,
    build_model,
    check_certificate,
    check_drift_energy,
    empirical_beta,
    empirical_lsi,
    functional,
    spectral_gap,
    spectral_gap_inverse_iteration,
)
