"""Verification tools: misreport hunting, ratio measurement, certificates."""

from .certificates import (
    DEFAULT_OPT_TOL,
    MAX_CERTIFICATE_P,
    OptMismatch,
    adversarial_deterministic_test,
    mixture_bound_certificate,
)
from .deviation import (
    DEFAULT_VIOLATION_TOL,
    UnsupportedSupport,
    best_deviation,
    deviation_cost_curve,
    misreport_candidates,
    sp_scan,
    symmetric_sp_margin,
    violation_threshold,
)
from .ratio import RatioSearchConfig, ratio, worst_ratio_search
from .reports import (
    AdversarialVerdict,
    DeviationReport,
    MixtureBoundCertificate,
    RatioReport,
    RatioWitness,
    SearchConfig,
    SPViolation,
    fmt,
    render_csv,
    render_json,
)

__all__ = [
    "DEFAULT_OPT_TOL",
    "DEFAULT_VIOLATION_TOL",
    "MAX_CERTIFICATE_P",
    "AdversarialVerdict",
    "DeviationReport",
    "MixtureBoundCertificate",
    "OptMismatch",
    "RatioReport",
    "RatioSearchConfig",
    "RatioWitness",
    "SPViolation",
    "SearchConfig",
    "UnsupportedSupport",
    "adversarial_deterministic_test",
    "best_deviation",
    "deviation_cost_curve",
    "fmt",
    "misreport_candidates",
    "mixture_bound_certificate",
    "ratio",
    "render_csv",
    "render_json",
    "sp_scan",
    "symmetric_sp_margin",
    "violation_threshold",
    "worst_ratio_search",
]
