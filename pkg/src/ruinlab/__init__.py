"""Importance-sampling estimation of ruin probabilities in Sparre Andersen
risk models via ruin-inducing changes of measure."""

from .engine import (
    EstimateReport,
    ReplicationOutcome,
    SimConfig,
    estimate_psi,
    estimate_psi_finite,
    estimate_psi_threshold,
    run_replication,
)
from .laws import (
    Exponential,
    Gamma,
    GenGamma,
    InvGamma,
    InvWeibull,
    LogNormal,
    Mixture,
    Pareto,
    PositiveLaw,
    Weibull,
    expectation,
    law_from_config,
)
from .lundberg import (
    AdjustmentSolution,
    MemmPoint,
    exact_psi_cl_exp,
    exact_psi_sa_exp,
    lundberg_root,
    memm_point,
    mmm_premium,
    theta_of_r,
    theta_prime,
    xi_hat,
)
from .model import RiskModel, model_from_config
from .tilts import (
    AdmissibilityReport,
    EsscherTilt,
    HazardTwist,
    IdentityTilt,
    LinearTilt,
    TargetTilt,
    TiltingPair,
    check_admissible,
    hazard_r_max,
    hazard_theta_min,
    hazard_twisted,
    normalization_residuals,
    size_biased,
    tilt_from_config,
)

__version__ = "0.1.0"

__all__ = [
    "AdjustmentSolution",
    "AdmissibilityReport",
    "EsscherTilt",
    "EstimateReport",
    "Exponential",
    "Gamma",
    "GenGamma",
    "HazardTwist",
    "IdentityTilt",
    "InvGamma",
    "InvWeibull",
    "LinearTilt",
    "LogNormal",
    "MemmPoint",
    "Mixture",
    "Pareto",
    "PositiveLaw",
    "ReplicationOutcome",
    "RiskModel",
    "SimConfig",
    "TargetTilt",
    "TiltingPair",
    "Weibull",
    "check_admissible",
    "estimate_psi",
    "estimate_psi_finite",
    "estimate_psi_threshold",
    "exact_psi_cl_exp",
    "exact_psi_sa_exp",
    "expectation",
    "hazard_r_max",
    "hazard_theta_min",
    "hazard_twisted",
    "law_from_config",
    "lundberg_root",
    "memm_point",
    "mmm_premium",
    "model_from_config",
    "normalization_residuals",
    "run_replication",
    "size_biased",
    "theta_of_r",
    "theta_prime",
    "tilt_from_config",
    "xi_hat",
]
