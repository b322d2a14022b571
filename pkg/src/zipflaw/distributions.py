"""
Discrete Zipf-like frequency distributions.

Three one-parameter families on the support n = a, a+1, ... :

    f1   power law in the pmf          f1(n) = n**-beta / zeta(beta, a)
    f2   power law in the survival     S2(n) = (a/n)**(beta-1)
    f3   Mandelbrot's gamma-ratio law  f3(n) = (beta-1) G(a)/G(a+1-beta) * G(n+1-beta)/G(n+1)

The survival function uses the non-strict convention S(n) = P[N >= n], so
pmf(n) = S(n) - S(n+1) and S(a) = 1.  f3 can also be written with beta
functions, B(n+1-beta, beta) / B(a+1-beta, beta-1); we only use the gamma form.

f3 is always evaluated through log-gamma differences (direct gamma ratios
overflow past n ~ 170).  f1 and f2 survivals use the zeta ratio and the plain
power directly.  Linear-space results are clamped to [0, 1].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli, gammaln

from .errors import DomainError

# Upper end of the optimizer domain for f1/f2.  Larger values only arise for
# samples where essentially every frequency equals the cutoff.
BETA_MAX = 50.0


class FamilyKind(str, enum.Enum):
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"

    def __str__(self):
        return self.value


def beta_domain(kind):
    """Open interval (lo, hi) of admissible exponents for ``kind``."""
    kind = FamilyKind(kind)
    if kind is FamilyKind.F3:
        return 1.0, 2.0
    return 1.0, BETA_MAX


def check_beta(kind, beta):
    lo, hi = beta_domain(kind)
    kind = FamilyKind(kind)
    ok = lo < beta < hi if kind is FamilyKind.F3 else lo < beta <= hi
    if not ok or not math.isfinite(beta):
        raise DomainError(f"beta={beta!r} outside the {kind.value} domain ({lo}, {hi})")


def check_cutoff(a):
    if int(a) != a or a < 1:
        raise DomainError(f"lower cutoff a must be a positive integer, got {a!r}")
    return int(a)


@dataclass(frozen=True)
class ZipfModel:
    """One member of a family: (kind, exponent, lower cutoff)."""

    kind: FamilyKind
    beta: float
    a: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "a", check_cutoff(self.a))
        check_beta(self.kind, self.beta)

    def to_dict(self):
        return {"kind": self.kind.value, "beta": self.beta, "a": self.a}

    @classmethod
    def from_dict(cls, d):
        return cls(FamilyKind(d["kind"]), float(d["beta"]), int(d["a"]))


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------

# Euler-Maclaurin: explicit sum of the first _EM_HEAD terms, then the
# integral, half-term and Bernoulli corrections at w = a + _EM_HEAD.
_EM_HEAD = 15
_EM_ORDER = 12
_B2J = bernoulli(2 * _EM_ORDER)[2::2]
_EM_COEF = np.array([_B2J[j - 1] / math.factorial(2 * j) for j in range(1, _EM_ORDER + 1)])


def hurwitz_zeta(s, a):
    """Hurwitz zeta function  zeta(s, a) = sum_{k>=0} (a + k)**-s.

    ``s`` is a scalar > 1; ``a`` may be a scalar or an array of values >= 1.
    Relative accuracy is about 1e-15 over 1 < s <= 50.
    """
    s = float(s)
    if not s > 1.0 or not math.isfinite(s):
        raise DomainError(f"hurwitz_zeta needs s > 1, got {s!r}")
    a_arr = np.asarray(a, dtype=float)
    if np.any(a_arr < 1) or np.any(~np.isfinite(a_arr)):
        raise DomainError("hurwitz_zeta needs a >= 1")

    k = np.arange(_EM_HEAD, dtype=float)
    head = np.sum((a_arr[..., None] + k) ** -s, axis=-1)
    w = a_arr + _EM_HEAD
    tail = w ** (1.0 - s) / (s - 1.0) + 0.5 * w ** -s
    # rising factorial s (s+1) ... (s+2j-2) times w**(-s-2j+1), built incrementally
    term = s * w ** (-s - 1.0)
    w2 = w * w
    corr = np.zeros_like(w)
    for j in range(_EM_ORDER):
        corr = corr + _EM_COEF[j] * term
        term = term * (s + 2 * j + 1) * (s + 2 * j + 2) / w2
    out = head + tail + corr
    return float(out) if out.ndim == 0 else out


def log_gamma(x):
    """ln Gamma(x) for x > 0 (scalar or array)."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("log_gamma needs x > 0")
    out = gammaln(x_arr)
    return float(out) if out.ndim == 0 else out


_STIRLING_MIN = 20.0


def _stirling_tail(z):
    # (ln Gamma(z) - Stirling leading part) to O(z**-9)
    zi = 1.0 / z
    zi2 = zi * zi
    return zi * (1.0 / 12 - zi2 * (1.0 / 360 - zi2 * (1.0 / 1260 - zi2 / 1680)))


def log_gamma_ratio(x, h):
    """ln Gamma(x + h) - ln Gamma(x), without the cancellation of two large lgammas.

    Needed for f3 at large n, where ln Gamma(n) ~ n ln n is big but the
    ratio is only ~ h ln n.
    """
    x = np.asarray(x, dtype=float)
    h = float(h)
    y = x + h
    if np.any(~(x > 0)) or np.any(~(y > 0)):
        raise DomainError("log_gamma_ratio needs x > 0 and x + h > 0")
    big = (x >= _STIRLING_MIN) & (y >= _STIRLING_MIN)
    out = np.empty_like(x)
    if np.any(big):
        xb, yb = x[big], y[big]
        out[big] = ((xb - 0.5) * np.log1p(h / xb) + h * np.log(yb) - h
                    + (_stirling_tail(yb) - _stirling_tail(xb)))
    small = ~big
    if np.any(small):
        out[small] = gammaln(y[small]) - gammaln(x[small])
    return float(out) if out.ndim == 0 else out


def rank_exponent_from_beta(beta):
    """Rank-frequency exponent alpha for a frequency exponent beta: alpha = 1/(beta - 1)."""
    if not beta > 1:
        raise DomainError(f"beta must exceed 1, got {beta!r}")
    return 1.0 / (beta - 1.0)


# ---------------------------------------------------------------------------
# pmf / survival
# ---------------------------------------------------------------------------

def _support(model, n):
    # scalars go through the same 1-element array loops as vectors, so both
    # give bit-identical results (numpy's SIMD pow differs from scalar pow)
    nf = np.atleast_1d(np.asarray(n)).astype(float)
    if np.any(nf < model.a):
        raise DomainError(f"n must be >= a={model.a}")
    return nf


def _unwrap(x, n):
    return float(np.ravel(x)[0]) if np.ndim(n) == 0 else x


def f3_log_norm(beta, a):
    """ln[(beta-1) Gamma(a) / Gamma(a+1-beta)], the f3 normalization."""
    return math.log(beta - 1.0) - float(log_gamma_ratio(a, 1.0 - beta))


def log_pmf(model, n):
    """Natural log of the pmf at integer(s) n >= a."""
    nf = _support(model, n)
    beta, a = model.beta, model.a
    if model.kind is FamilyKind.F1:
        out = -beta * np.log(nf) - math.log(hurwitz_zeta(beta, a))
    elif model.kind is FamilyKind.F2:
        # S2(n) * (1 - (n/(n+1))**(beta-1))
        out = ((beta - 1.0) * (math.log(a) - np.log(nf))
               + np.log(-np.expm1(-(beta - 1.0) * np.log1p(1.0 / nf))))
    else:
        out = f3_log_norm(beta, a) + log_gamma_ratio(nf + 1.0, -beta)
    return _unwrap(out, n)


def pmf(model, n):
    if model.kind is FamilyKind.F2:
        nf = _support(model, n)
        b1 = model.beta - 1.0
        out = (model.a / nf) ** b1 * -np.expm1(-b1 * np.log1p(1.0 / nf))
    else:
        out = np.exp(log_pmf(model, n))
    return _unwrap(np.clip(out, 0.0, 1.0), n)


def log_survival(model, n):
    """ln P[N >= n]; exactly 0 at n = a."""
    nf = _support(model, n)
    beta, a = model.beta, model.a
    if model.kind is FamilyKind.F1:
        out = np.log(hurwitz_zeta(beta, nf)) - math.log(hurwitz_zeta(beta, a))
    elif model.kind is FamilyKind.F2:
        out = (beta - 1.0) * (math.log(a) - np.log(nf))
    else:
        out = log_gamma_ratio(nf, 1.0 - beta) - float(log_gamma_ratio(a, 1.0 - beta))
    out = np.where(nf == a, 0.0, out)
    return _unwrap(out, n)


def survival(model, n):
    if model.kind is FamilyKind.F2:
        nf = _support(model, n)
        out = (model.a / nf) ** (model.beta - 1.0)
    elif model.kind is FamilyKind.F1:
        nf = _support(model, n)
        out = hurwitz_zeta(model.beta, nf) / hurwitz_zeta(model.beta, model.a)
        out = np.where(nf == model.a, 1.0, out)
    else:
        out = np.exp(log_survival(model, n))
    return _unwrap(np.clip(out, 0.0, 1.0), n)
