"""Bivariate discrete inverse Weibull distribution: model, inference, simulation."""

from ._core import (
    BivMaxModel,
    BivMaxParams,
    Family,
    FamilyTag,
    FitReport,
    InfoCriteria,
    LrtReport,
    PairObs,
    PairedSample,
    Rng,
    StudyCell,
    UnivariateFitReport,
    chi2_sf,
    fit_mle,
    fit_univariate,
    football_pairs,
    info_criteria,
    log_likelihood,
    lrt,
    nasal_pairs,
    run_study,
)

__all__ = [
    "BivMaxModel",
    "BivMaxParams",
    "Family",
    "FamilyTag",
    "FitReport",
    "InfoCriteria",
    "LrtReport",
    "PairObs",
    "PairedSample",
    "Rng",
    "StudyCell",
    "UnivariateFitReport",
    "chi2_sf",
    "fit_mle",
    "fit_univariate",
    "football_pairs",
    "info_criteria",
    "log_likelihood",
    "lrt",
    "nasal_pairs",
    "run_study",
]
