"""Hyperbolic and quasihyperbolic distances on plane domains: explicit
formulas, certified enclosures, boundary-gap exponents, uniform-perfectness
estimates, and explicit rough isometries between the two metrics."""

from .constants import (
    ABC_HYPERBOLIC,
    ABC_QUASIHYPERBOLIC,
    KAPPA,
    PI_OVER_LOG2,
)
from .geometry import (
    INF,
    Annulus,
    ExtPoint,
    MobiusMap,
    Polyline,
    as_finite,
    chi_arc,
    chordal_distance,
    chordal_distance_field,
    is_infinite,
    segment_point_distance,
    spherical_distance,
)
from .domains import (
    ComplementDisk,
    ComplementDiskExterior,
    ComplementHalfPlane,
    ComplementPoint,
    Domain,
    DomainError,
    ExteriorUnitDisk,
    FiniteComplement,
    OutsideDomainError,
    PuncturedSubdomain,
    PuncturedUnitDisk,
    SchemaError,
    TranslatedScaled,
    UnitDisk,
    UnsupportedDomainError,
    UpperHalfPlane,
    UniformArcReport,
    check_uniform_arc,
    domain_from_json,
    domain_from_json_text,
    rho_length,
)
from .densities import (
    DistanceInterval,
    InconsistentIntervalError,
    chordal_quasihyperbolic_density,
    disk_exterior_density,
    h01_lower,
    h_interval,
    h_upper_Dstar,
    h_upper_disk_exterior,
    h_upper_three_punct,
    halfplane_density,
    halfplane_distance,
    hyperbolic_disk_density,
    hyperbolic_disk_distance,
    lambda01_lower,
    punctured_disk_density,
    quasihyperbolic_density,
)
from .beta import (
    ABCReport,
    BetaResult,
    BetaWitness,
    BPBounds,
    BPDecayReport,
    FatAnnulusWitness,
    UPCircle,
    UPCircleFamily,
    UPConversion,
    UPDisk,
    UPDiskExterior,
    UPHalfPlane,
    UPPoint,
    UPRay,
    UPReport,
    UPSet,
    beta,
    beta_field,
    bp_lambda_bounds,
    bp_lower_density,
    bp_upper_density,
    check_abc,
    check_bp_decay,
    chordal_up_to_euclidean_bound,
    dyadic_annulus_candidates,
    fat_annulus_witness,
    up_modulus_sup,
    up_set_from_json,
)
from .solver import (
    AnnulusComparisonReport,
    GeodesicResult,
    MobiusQIReport,
    Resolution,
    SolverError,
    annulus_inside,
    check_annulus_k_comparison,
    check_mobius_quasi_invariance,
    chordal_gp_lower,
    gp_lower_bound,
    gp_ratio_lower_bound,
    k_chordal_numeric,
    k_halfplane_exact,
    k_interval_fast,
    k_length_lower,
    k_lower_analytic,
    k_numeric,
    k_star_exact,
    thin_triangle_defect,
)
from .equivalence import (
    DivergenceTable,
    GlobalQIMap,
    PunctureConfig,
    QIEReport,
    QSIdentityReport,
    RoughIsometryReport,
    build_global_qi_map,
    counterexample_divergence,
    default_config,
    phi_infinity,
    phi_p,
    phi_punctured_disk,
    psi_log,
    qie_inequality_check,
    qs_eventual_identity_index,
    theta_ray,
    verify_rough_isometry,
)

__version__ = "0.1.0"
