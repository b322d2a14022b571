"""Vuong-style likelihood-ratio test between the f1 and f2 fits of one sample."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import FamilyKind, ZipfModel, check_cutoff, log_pmf
from .errors import DomainError, ZeroVarianceError
from .estimation import as_frequencies

Z_975 = 1.96


class Verdict(str, enum.Enum):
    FAVORS_F1 = "favors-f1"
    FAVORS_F2 = "favors-f2"
    NOT_SIGNIFICANT = "not-significant"


def verdict_for(r12, r_crit):
    if r12 > r_crit:
        return Verdict.FAVORS_F1
    if r12 < -r_crit:
        return Verdict.FAVORS_F2
    return Verdict.NOT_SIGNIFICANT


@dataclass
class LrResult:
    r12: float
    sigma2: float
    n: int
    p_lr: float
    r_crit: float
    verdict: Verdict

    def to_dict(self):
        return {"r12": self.r12, "sigma2": self.sigma2, "n": self.n, "p_lr": self.p_lr,
                "r_crit": self.r_crit, "verdict": self.verdict.value}

    @classmethod
    def from_dict(cls, d):
        return cls(d["r12"], d["sigma2"], d["n"], d["p_lr"], d["r_crit"], Verdict(d["verdict"]))


def pointwise_log_ratio(data, model_x, model_y):
    """ln f_x(n_i) - ln f_y(n_i) for every observation (as distinct values + counts)."""
    u, c = data.distinct
    return log_pmf(model_x, u) - log_pmf(model_y, u), c


def lr_from_ratios(ratios, counts):
    """LR statistics from per-point log ratios given as (distinct ratio, multiplicity)."""
    ratios = np.asarray(ratios, dtype=float)
    counts = np.asarray(counts)
    n = int(counts.sum())
    r12 = float(np.dot(counts, ratios))
    mean = r12 / n
    sigma2 = float(np.dot(counts, (ratios - mean) ** 2) / n)
    if sigma2 <= 0.0 or np.all(ratios == ratios[0]):
        err = ZeroVarianceError(f"all per-point log ratios equal (R12={r12:.6g})")
        err.r12 = r12
        raise err
    r_crit = Z_975 * math.sqrt(n * sigma2)
    p_lr = math.erfc(abs(r12) / math.sqrt(2.0 * n * sigma2))
    return LrResult(r12, sigma2, n, p_lr, r_crit, verdict_for(r12, r_crit))


def lr_test(data, beta1, beta2, a=1):
    """Compare f1(beta1) against f2(beta2) on the same sample.

    R12 > 0 means f1 has the higher likelihood.  The per-point variance uses
    the 1/N (population) form; a sample whose log ratios are all equal raises
    ZeroVarianceError.
    """
    a = check_cutoff(a)
    data = as_frequencies(data)
    if data.N == 0:
        raise DomainError("empty frequency vector")
    if data.min() < a:
        raise DomainError(f"data value {data.min()} below the cutoff a={a}")
    ratios, counts = pointwise_log_ratio(data, ZipfModel(FamilyKind.F1, beta1, a),
                                         ZipfModel(FamilyKind.F2, beta2, a))
    return lr_from_ratios(ratios, counts)
