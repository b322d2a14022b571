"""
Corpus-level summaries of TextReports: p-value histograms and survival
curves, acceptance versus text length, exponent densities, text-length
density and the LR / KS cross-tabulations.

A family without a p-value (degenerate fit or failed test) counts as p = 0,
i.e. rejected at every level.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import FamilyKind
from .errors import DomainError, FingerprintMismatchError
from .model_selection import Verdict
from .pipeline import FAMILIES, LR_OK, LR_ZERO_VARIANCE

log = logging.getLogger(__name__)

DEFAULT_LEVELS = (0.05, 0.20, 0.50)
DEFAULT_BIN_SIZE = 1000
HIST_BINS = 100
NEAR_ZERO = 0.01
# p-values are multiples of 1/n_sims and levels multiples of 0.01; absorb
# representation error in comparisons and bin assignment
_P_EPS = 1e-9

CAT_F1_ONLY = "f1-only"
CAT_F2_ONLY = "f2-only"
CAT_BOTH = "both"
CAT_NEITHER = "neither"
CATEGORIES = (CAT_F1_ONLY, CAT_F2_ONLY, CAT_BOTH, CAT_NEITHER)


def check_fingerprints(reports):
    fps = {tuple(sorted(r.fingerprint.items())) for r in reports}
    if len(fps) > 1:
        raise FingerprintMismatchError(f"reports come from {len(fps)} different configurations")
    return dict(next(iter(fps))) if fps else None


def pvalue(report, kind):
    p = report.family(kind).p_value
    return 0.0 if p is None else p


def accepted(report, kind, level):
    return pvalue(report, kind) >= level - _P_EPS


def pvalue_histogram(reports, family, bins=HIST_BINS):
    """Counts of p-values in left-closed bins of width 1/bins over [0, 1]; p = 1 joins the last bin."""
    counts = np.zeros(bins, dtype=np.int64)
    for r in reports:
        k = min(int(math.floor(pvalue(r, family) * bins + _P_EPS)), bins - 1)
        counts[k] += 1
    return counts


def pvalue_survival(reports, step=0.01):
    """Fraction of texts with p >= t for t = step, 2 step, ..., 1 (t = 0 omitted).

    Returns (thresholds, {"f1", "f2", "f3", "f1&f2": fractions}).
    """
    k = int(round(1.0 / step))
    thresholds = np.arange(1, k + 1) / k
    n = len(reports)
    p = {kind: np.array([pvalue(r, kind) for r in reports]) for kind in FAMILIES}
    curves = {}
    for kind in FAMILIES:
        curves[kind.value] = np.array([np.count_nonzero(p[kind] >= t - _P_EPS) for t in thresholds]) / max(n, 1)
    joint = np.minimum(p[FamilyKind.F1], p[FamilyKind.F2])
    curves["f1&f2"] = np.array([np.count_nonzero(joint >= t - _P_EPS) for t in thresholds]) / max(n, 1)
    return thresholds, curves


def equal_count_bins(reports, bin_size):
    """Consecutive groups of ``bin_size`` texts in order of (L, id); the remainder forms a last, smaller bin."""
    ordered = sorted(reports, key=lambda r: (r.L, r.id))
    if bin_size >= len(ordered) and len(ordered) > 0:
        if bin_size > len(ordered):
            log.warning("bin size %d exceeds corpus size %d: using a single bin", bin_size, len(ordered))
        return [ordered]
    return [ordered[i:i + bin_size] for i in range(0, len(ordered), bin_size)]


def geometric_label(group):
    return math.sqrt(group[0].L * group[-1].L)


def acceptance_by_length(reports, levels=DEFAULT_LEVELS, bin_size=DEFAULT_BIN_SIZE):
    """Per length bin: acceptance fraction per family and level, and near-zero fraction.

    ``rescaled`` divides a bin's acceptance fraction by the family's overall
    acceptance fraction at that level, which makes curves for different
    levels comparable.
    """
    rows = []
    overall = {(k, lv): np.mean([accepted(r, k, lv) for r in reports]) if reports else 0.0
               for k in FAMILIES for lv in levels}
    for i, group in enumerate(equal_count_bins(reports, bin_size)):
        base = {"bin": i, "n_texts": len(group), "L_min": group[0].L, "L_max": group[-1].L,
                "L_label": geometric_label(group)}
        for kind in FAMILIES:
            near_zero = np.mean([pvalue(r, kind) < NEAR_ZERO - _P_EPS for r in group])
            for lv in levels:
                frac = float(np.mean([accepted(r, kind, lv) for r in group]))
                tot = overall[(kind, lv)]
                rows.append({**base, "family": kind.value, "level": lv, "accepted_fraction": frac,
                             "rescaled": frac / tot if tot > 0 else float("nan"),
                             "near_zero_fraction": float(near_zero)})
    return rows


def normal_reference_bandwidth(x):
    """Silverman's normal reference rule, (4/(3n))**(1/5) * sd."""
    x = np.asarray(x, dtype=float)
    return (4.0 / (3.0 * x.size)) ** 0.2 * np.std(x, ddof=1)


def gaussian_kde(x, grid, bandwidth):
    x = np.asarray(x, dtype=float)
    z = (grid[:, None] - x[None, :]) / bandwidth
    return np.exp(-0.5 * z * z).sum(axis=1) / (x.size * bandwidth * math.sqrt(2 * math.pi))


@dataclass
class BetaDensity:
    family: str
    level: float
    n: int
    mean: float
    sd: float
    bandwidth: float
    grid: np.ndarray
    density: np.ndarray
    L_range: tuple = field(default=(None, None))


def _beta_density(betas, family, level, grid, L_range=(None, None)):
    betas = np.asarray(betas, dtype=float)
    if betas.size < 2:
        raise DomainError("beta density needs at least two accepted texts")
    sd = float(np.std(betas, ddof=1))
    h = float(normal_reference_bandwidth(betas))
    if not h > 0:
        # identical estimates: keep a visible spike at the common value
        h = 1e-3 * max(abs(float(betas.mean())), 1.0)
    if grid is None:
        grid = np.linspace(betas.min() - 4 * h, betas.max() + 4 * h, 200)
    return BetaDensity(family, level, int(betas.size), float(betas.mean()), sd, h, grid,
                       gaussian_kde(betas, grid, h), L_range)


def beta_density(reports, family, level=0.05, quantiles=None, grid=None):
    """Normal-kernel density of beta-hat over texts with p >= level.

    With ``quantiles=q`` the accepted texts are split into q equal-count
    groups by L and one density is returned per group.
    """
    family = FamilyKind(family)
    acc = sorted((r for r in reports if accepted(r, family, level)), key=lambda r: (r.L, r.id))
    if quantiles is None:
        return _beta_density([r.family(family).fit.beta for r in acc], family.value, level, grid)
    if len(acc) < 2 * quantiles:
        raise DomainError(f"need at least {2 * quantiles} accepted texts for {quantiles} length groups")
    out = []
    for part in np.array_split(np.arange(len(acc)), quantiles):
        group = [acc[i] for i in part]
        out.append(_beta_density([r.family(family).fit.beta for r in group], family.value, level, grid,
                                 (group[0].L, group[-1].L)))
    return out


def log_bin_index(L, per_decade=5):
    k = int(math.floor(per_decade * math.log10(L)))
    while 10 ** ((k + 1) / per_decade) <= L:
        k += 1
    while 10 ** (k / per_decade) > L:
        k -= 1
    return k


def length_density(reports, min_tokens=100, per_decade=5):
    """Log-binned density of text lengths: rows (lo, hi, count, density) over non-empty span."""
    Ls = [r.L for r in reports if r.L > min_tokens]
    if not Ls:
        return []
    idx = [log_bin_index(L, per_decade) for L in Ls]
    lo_k, hi_k = min(idx), max(idx)
    counts = np.bincount(np.array(idx) - lo_k, minlength=hi_k - lo_k + 1)
    total = len(Ls)
    rows = []
    for j, c in enumerate(counts):
        k = lo_k + j
        lo, hi = 10 ** (k / per_decade), 10 ** ((k + 1) / per_decade)
        rows.append({"k": k, "L_lo": lo, "L_hi": hi, "count": int(c), "density": c / ((hi - lo) * total)})
    return rows


def ks_category(report, level):
    a1 = accepted(report, FamilyKind.F1, level)
    a2 = accepted(report, FamilyKind.F2, level)
    if a1 and a2:
        return CAT_BOTH
    if a1:
        return CAT_F1_ONLY
    if a2:
        return CAT_F2_ONLY
    return CAT_NEITHER


def lr_crosstab(reports, level=0.05):
    """KS-acceptance category against the sign of R12 and against a significant LR verdict.

    Returns ``{category: {...counts...}}`` for the four categories.  Sign
    counts use R12 even when its variance is zero; significance needs a full
    LR result.
    """
    table = {c: {"texts": 0, "r12_pos": 0, "r12_neg": 0, "r12_zero": 0, "no_r12": 0,
                 "sig_f1": 0, "sig_f2": 0, "zero_variance": 0} for c in CATEGORIES}
    have_lr = False
    for r in reports:
        row = table[ks_category(r, level)]
        row["texts"] += 1
        if r.r12 is None:
            row["no_r12"] += 1
        elif r.r12 > 0:
            row["r12_pos"] += 1
        elif r.r12 < 0:
            row["r12_neg"] += 1
        else:
            row["r12_zero"] += 1
        if r.lr_status == LR_ZERO_VARIANCE:
            row["zero_variance"] += 1
        if r.lr_status == LR_OK:
            have_lr = True
            if r.lr.verdict is Verdict.FAVORS_F1:
                row["sig_f1"] += 1
            elif r.lr.verdict is Verdict.FAVORS_F2:
                row["sig_f2"] += 1
    if reports and not have_lr:
        log.warning("no text has a usable LR test (all zero-variance or skipped)")
    return table


def acceptance_summary(reports, levels=DEFAULT_LEVELS):
    rows = []
    n = len(reports)
    for lv in levels:
        cnt = {k.value: sum(accepted(r, k, lv) for r in reports) for k in FAMILIES}
        both = sum(accepted(r, FamilyKind.F1, lv) and accepted(r, FamilyKind.F2, lv) for r in reports)
        rows.append({"level": lv, "n_texts": n, **{f"accepted_{k}": v for k, v in cnt.items()},
                     "accepted_both": both,
                     "ratio_f2_f1": cnt["f2"] / cnt["f1"] if cnt["f1"] else None})
    return rows


@dataclass
class AggregateReport:
    n_texts: int
    fingerprint: dict | None
    levels: tuple
    bin_size: int
    histograms: dict
    survival_thresholds: np.ndarray
    survival: dict
    acceptance_by_length: list
    beta_densities: list
    length_density: list
    lr_tables: dict
    summary: list
    notes: list = field(default_factory=list)

    def write_csvs(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        lo = np.arange(HIST_BINS) / HIST_BINS
        _write(out / "pvalue_histogram.csv", ["bin_lo", "bin_hi"] + [k.value for k in FAMILIES],
               [[f"{lo[i]:.2f}", f"{lo[i] + 1 / HIST_BINS:.2f}"] + [int(self.histograms[k.value][i]) for k in FAMILIES]
                for i in range(HIST_BINS)])
        keys = list(self.survival)
        _write(out / "pvalue_survival.csv", ["threshold"] + keys,
               [[f"{t:.2f}"] + [float(self.survival[k][i]) for k in keys]
                for i, t in enumerate(self.survival_thresholds)])
        _write_dicts(out / "acceptance_by_length.csv", self.acceptance_by_length)
        beta_rows = []
        for d in self.beta_densities:
            for g, v in zip(d.grid, d.density):
                beta_rows.append({"family": d.family, "level": d.level, "L_min": d.L_range[0],
                                  "L_max": d.L_range[1], "beta": float(g), "density": float(v)})
        _write_dicts(out / "beta_density.csv", beta_rows,
                     ["family", "level", "L_min", "L_max", "beta", "density"])
        _write_dicts(out / "beta_summary.csv",
                     [{"family": d.family, "level": d.level, "L_min": d.L_range[0], "L_max": d.L_range[1],
                       "n": d.n, "mean": d.mean, "sd": d.sd, "bandwidth": d.bandwidth,
                       "kernel": "normal", "bandwidth_rule": "silverman-normal-reference"}
                      for d in self.beta_densities],
                     ["family", "level", "L_min", "L_max", "n", "mean", "sd", "bandwidth", "kernel",
                      "bandwidth_rule"])
        _write_dicts(out / "length_density.csv", self.length_density, ["k", "L_lo", "L_hi", "count", "density"])
        tab_rows = [{"level": lv, "category": c, **row} for lv, t in self.lr_tables.items() for c, row in t.items()]
        _write_dicts(out / "lr_crosstab.csv", tab_rows,
                     ["level", "category", "texts", "r12_pos", "r12_neg", "r12_zero", "no_r12",
                      "sig_f1", "sig_f2", "zero_variance"])
        _write_dicts(out / "summary.csv", self.summary)


def _write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_dicts(path, rows, fieldnames=None):
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        w.writerows(rows)


def aggregate(reports, levels=DEFAULT_LEVELS, bin_size=DEFAULT_BIN_SIZE, density_level=0.05, quantiles=4):
    """Fold TextReports (in text-id order) into every corpus-level summary."""
    reports = sorted(reports, key=lambda r: r.id)
    fp = check_fingerprints(reports)
    notes = []
    if not reports:
        log.warning("no reports to aggregate")
        notes.append("empty corpus")
    thresholds, surv = pvalue_survival(reports)
    densities = []
    min_tokens = fp["min_tokens"] if fp else 100
    for kind in (FamilyKind.F1, FamilyKind.F2):
        try:
            densities.append(beta_density(reports, kind, density_level))
        except DomainError as exc:
            notes.append(f"beta density {kind.value}: {exc}")
            continue
        try:
            densities.extend(beta_density(reports, kind, density_level, quantiles=quantiles))
        except DomainError as exc:
            notes.append(f"beta density by length {kind.value}: {exc}")
    return AggregateReport(
        n_texts=len(reports),
        fingerprint=fp,
        levels=tuple(levels),
        bin_size=bin_size,
        histograms={k.value: pvalue_histogram(reports, k) for k in FAMILIES},
        survival_thresholds=thresholds,
        survival=surv,
        acceptance_by_length=acceptance_by_length(reports, levels, bin_size) if reports else [],
        beta_densities=densities,
        length_density=length_density(reports, min_tokens),
        lr_tables={lv: lr_crosstab(reports, lv) for lv in sorted({0.05, *levels})},
        summary=acceptance_summary(reports, levels),
        notes=notes,
    )
