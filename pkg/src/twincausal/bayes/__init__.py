from .abc import CausalContrast, abc_nonidentifiable
from .conjugate import (
    CptPosterior,
    default_outcome,
    fit_posteriors,
    monte_carlo_predictive,
    posterior_predictive,
    predictive_distribution,
)
from .cpts import (
    check_cpts,
    cpts_from_json,
    cpts_to_json,
    estimate_cpts,
    forward_sample,
    truncated_product,
)
from .frontdoor import (
    FrontDoorPosterior,
    fit_frontdoor,
    frontdoor_distribution,
    frontdoor_predictive,
)

__all__ = [
    "CausalContrast",
    "CptPosterior",
    "FrontDoorPosterior",
    "abc_nonidentifiable",
    "check_cpts",
    "cpts_from_json",
    "cpts_to_json",
    "default_outcome",
    "estimate_cpts",
    "fit_frontdoor",
    "fit_posteriors",
    "forward_sample",
    "frontdoor_distribution",
    "frontdoor_predictive",
    "monte_carlo_predictive",
    "posterior_predictive",
    "predictive_distribution",
    "truncated_product",
]
