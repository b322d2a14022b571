"""Maximum-likelihood estimation of the exponent beta for one family."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

from .distributions import FamilyKind, ZipfModel, check_cutoff, hurwitz_zeta, log_pmf, BETA_MAX
from .errors import DegenerateSampleError, DomainError

BETA_EPS = 1e-6
BETA_XTOL = 1e-6

STATUS_OK = "ok"
STATUS_DEGENERATE = "degenerate-sample"
STATUS_BOUNDARY = "boundary"

# stand-in for -inf log-likelihood so the bracketed search stays well defined
_NEG_HUGE = -1e300


class FrequencyVector:
    """Multiset of word-type frequencies {n_i} of one text.

    Order is irrelevant to every computation here; everything derived goes
    through the sorted distinct values and their multiplicities.
    """

    def __init__(self, values):
        arr = np.asarray(values)
        if arr.ndim != 1:
            raise DomainError("frequencies must be a 1-d sequence")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            as_int = arr.astype(np.int64)
            if not np.array_equal(as_int, arr):
                raise DomainError("frequencies must be integers")
            arr = as_int
        arr = arr.astype(np.int64, copy=False)
        if arr.size and arr.min() < 1:
            raise DomainError("frequencies must be positive")
        self.values = arr

    def __len__(self):
        return int(self.values.size)

    def __repr__(self):
        return f"FrequencyVector(N={self.N}, L={self.L})"

    def __eq__(self, other):
        if not isinstance(other, FrequencyVector):
            return NotImplemented
        return np.array_equal(self.sorted_desc(), other.sorted_desc())

    @property
    def N(self):
        return int(self.values.size)

    @cached_property
    def L(self):
        return int(self.values.sum())

    @cached_property
    def distinct(self):
        """(ascending distinct values, multiplicities)."""
        u, c = np.unique(self.values, return_counts=True)
        return u, c

    @cached_property
    def sum_log(self):
        u, c = self.distinct
        return float(np.dot(c, np.log(u.astype(float))))

    @property
    def G(self):
        """Geometric mean of the frequencies."""
        return math.exp(self.sum_log / self.N)

    def min(self):
        return int(self.values.min())

    def max(self):
        return int(self.values.max())

    def sorted_desc(self):
        return np.sort(self.values)[::-1]


def as_frequencies(data):
    return data if isinstance(data, FrequencyVector) else FrequencyVector(data)


@dataclass
class FitResult:
    model: ZipfModel
    loglik: float
    iterations: int
    converged: bool
    bracket: tuple
    status: str = STATUS_OK
    n: int = 0

    @property
    def beta(self):
        return self.model.beta

    @property
    def degenerate(self):
        return self.status == STATUS_DEGENERATE

    def to_dict(self):
        return {
            "model": self.model.to_dict(),
            "loglik": self.loglik,
            "iterations": self.iterations,
            "converged": self.converged,
            "bracket": list(self.bracket),
            "status": self.status,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(ZipfModel.from_dict(d["model"]), d["loglik"], d["iterations"],
                   d["converged"], tuple(d["bracket"]), d["status"], d["n"])


def fit_bracket(kind):
    kind = FamilyKind(kind)
    if kind is FamilyKind.F3:
        return 1.0 + BETA_EPS, 2.0 - BETA_EPS
    return 1.0 + BETA_EPS, BETA_MAX


def _loglik_function(kind, data, a, method):
    """Return beta -> l(beta) for fixed data; shared by fitting and recomputation."""
    u, c = data.distinct
    N = data.N
    if kind is FamilyKind.F1 and method == "closed":
        sum_log = data.sum_log

        def f(beta):
            return -N * math.log(hurwitz_zeta(beta, a)) - beta * sum_log
    else:
        def f(beta):
            return float(np.dot(c, log_pmf(ZipfModel(kind, beta, a), u)))
    return f


def _check_data(data, a):
    if data.N == 0:
        raise DomainError("empty frequency vector")
    if data.min() < a:
        raise DomainError(f"data value {data.min()} below the cutoff a={a}")


def log_likelihood(kind, data, beta, a=1, method="closed"):
    """Sum of ln f(n_i; beta, a) over the sample.

    For f1 ``method="closed"`` (default) uses -N ln zeta(beta, a) - beta sum(ln n_i);
    ``method="direct"`` sums the log-pmf instead.  Other families always sum.
    """
    kind = FamilyKind(kind)
    a = check_cutoff(a)
    data = as_frequencies(data)
    _check_data(data, a)
    ZipfModel(kind, beta, a)  # parameter-domain check
    return _loglik_function(kind, data, a, method)(float(beta))


def fit_mle(kind, data, a=1, xtol=BETA_XTOL):
    """Maximize l(beta) over the family domain with bounded Brent.

    Samples where every value equals ``a`` have no interior maximum; they
    come back with ``status="degenerate-sample"``, beta at the upper bracket
    end and ``converged=False``.  An optimum pressed against either bracket
    end for a non-degenerate sample is flagged ``status="boundary"``.
    """
    kind = FamilyKind(kind)
    a = check_cutoff(a)
    data = as_frequencies(data)
    _check_data(data, a)
    if data.N < 2:
        raise DomainError("fitting needs at least two frequencies")

    lo, hi = fit_bracket(kind)
    if data.max() == a:
        beta = hi
        return FitResult(ZipfModel(kind, beta, a), log_likelihood(kind, data, beta, a),
                         0, False, (lo, hi), STATUS_DEGENERATE, data.N)

    loglik = _loglik_function(kind, data, a, "closed")

    def objective(beta):
        v = loglik(beta)
        return -v if math.isfinite(v) else -_NEG_HUGE

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": xtol, "maxiter": 500})
    beta = float(res.x)
    status = STATUS_OK
    if beta - lo < 10 * xtol or hi - beta < 10 * xtol:
        status = STATUS_BOUNDARY
    converged = bool(res.success) and status == STATUS_OK
    return FitResult(ZipfModel(kind, beta, a), log_likelihood(kind, data, beta, a),
                     int(res.nit), converged, (lo, hi), status, data.N)


def require_fit(fit):
    if fit.degenerate:
        raise DegenerateSampleError(f"{fit.model.kind.value}: every value equals the cutoff")
    return fit
