"""Discrete Kolmogorov-Smirnov statistic and its Monte-Carlo p-value."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .distributions import FamilyKind, check_cutoff, survival
from .errors import DomainError
from .estimation import as_frequencies, fit_mle, require_fit
from .sampling import SamplerState, draw

log = logging.getLogger(__name__)

DEFAULT_SIMS = 100


@dataclass
class GofResult:
    d_stat: float
    p_value: float
    n_sims: int
    seed: int
    stream_id: int = 0
    n_ge: int = 0
    regenerated: int = 0
    replicate_ds: list | None = field(default=None, repr=False)

    def to_dict(self, with_replicates=False):
        d = {
            "d_stat": self.d_stat,
            "p_value": self.p_value,
            "n_sims": self.n_sims,
            "seed": self.seed,
            "stream_id": self.stream_id,
            "n_ge": self.n_ge,
            "regenerated": self.regenerated,
        }
        if with_replicates and self.replicate_ds is not None:
            d["replicate_ds"] = list(self.replicate_ds)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["d_stat"], d["p_value"], d["n_sims"], d["seed"], d.get("stream_id", 0),
                   d.get("n_ge", 0), d.get("regenerated", 0), d.get("replicate_ds"))


def ks_statistic(data, model):
    """D = max over integers n in [a, max(data)] of |S_emp(n) - S_model(n)|.

    S_emp(n) = #{i: n_i >= n} / N is constant on each run (u_{j-1}, u_j] between
    consecutive distinct data values while S_model decreases, so the maximum
    over a run is at one of its two ends.  Only those ends are evaluated.
    """
    data = as_frequencies(data)
    if data.N == 0:
        raise DomainError("empty frequency vector")
    u, c = data.distinct
    if u[0] < model.a:
        raise DomainError(f"data value {u[0]} below the cutoff a={model.a}")
    # fraction of the sample >= u_j, for each distinct u_j
    s_emp = np.cumsum(c[::-1])[::-1] / data.N
    left = np.empty_like(u)
    left[0] = model.a
    left[1:] = u[:-1] + 1
    s_left = survival(model, left)
    s_right = survival(model, u)
    d = max(np.max(np.abs(s_emp - s_left)), np.max(np.abs(s_emp - s_right)))
    return float(d)


def _replicate_d(kind, beta, a, size, state):
    sample = draw(kind, beta, a, size, state)
    fit = fit_mle(kind, sample, a)
    return ks_statistic(sample, fit.model)


def mc_pvalue(data, kind, a=1, n_sims=DEFAULT_SIMS, state=None, fit=None, keep_replicates=False):
    """Monte-Carlo p-value of the KS statistic with per-replicate refitting.

    Each replicate draws N values from the fitted model, refits beta on them
    and measures D against its own refit.  p = #{D_rep >= D_obs} / n_sims.
    Replicate i uses ``state.substream(i)``; a replicate whose refit raises
    is redrawn from the next unused substream index (>= n_sims).
    """
    kind = FamilyKind(kind)
    a = check_cutoff(a)
    data = as_frequencies(data)
    if n_sims < 1:
        raise DomainError("n_sims must be positive")
    if state is None:
        state = SamplerState(0)
    if fit is None:
        fit = fit_mle(kind, data, a)
    require_fit(fit)
    beta = fit.model.beta
    d_obs = ks_statistic(data, fit.model)

    ds = np.empty(n_sims)
    spare = n_sims
    regenerated = 0
    for i in range(n_sims):
        sub = state.substream(i)
        while True:
            try:
                ds[i] = _replicate_d(kind, beta, a, data.N, sub)
                break
            except (DomainError, ArithmeticError) as exc:
                if regenerated >= 10 * n_sims:
                    raise
                log.warning("replicate %d refit failed (%s); redrawing from substream %d", i, exc, spare)
                sub = state.substream(spare)
                spare += 1
                regenerated += 1
    n_ge = int(np.count_nonzero(ds >= d_obs))
    return GofResult(d_obs, n_ge / n_sims, n_sims, state.seed, state.stream_id, n_ge, regenerated,
                     ds.tolist() if keep_replicates else None)
