"""Fitting and testing discrete Zipf-like distributions of word frequencies."""

from .distributions import (
    FamilyKind,
    ZipfModel,
    hurwitz_zeta,
    log_gamma,
    log_pmf,
    pmf,
    rank_exponent_from_beta,
    survival,
)
from .estimation import FitResult, FrequencyVector, fit_mle, log_likelihood
from .gof import GofResult, ks_statistic, mc_pvalue
from .model_selection import LrResult, Verdict, lr_test
from .sampling import SamplerState, sample_f1, sample_f2, sample_f3, sample_iid

__version__ = "0.1.0"

__all__ = [
    "FamilyKind", "ZipfModel", "hurwitz_zeta", "log_gamma", "log_pmf", "pmf", "survival",
    "rank_exponent_from_beta", "FrequencyVector", "FitResult", "fit_mle", "log_likelihood",
    "GofResult", "ks_statistic", "mc_pvalue", "LrResult", "Verdict", "lr_test",
    "SamplerState", "sample_f1", "sample_f2", "sample_f3", "sample_iid",
]
