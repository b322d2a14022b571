"""Per-text analysis (three fits, KS p-values, LR test) and batch runs over a corpus."""
from __future__ import annotations

import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import IngestConfig, TextRecord, read_frequency_file
from .distributions import FamilyKind
from .errors import DegenerateSampleError, ZeroVarianceError, ZipfError
from .estimation import FitResult, STATUS_DEGENERATE, fit_mle
from .gof import DEFAULT_SIMS, GofResult, mc_pvalue
from .model_selection import LrResult, lr_test
from .sampling import SamplerState

log = logging.getLogger(__name__)

FAMILIES = (FamilyKind.F1, FamilyKind.F2, FamilyKind.F3)
_STREAM = {FamilyKind.F1: 1, FamilyKind.F2: 2, FamilyKind.F3: 3}

LR_OK = "ok"
LR_ZERO_VARIANCE = "zero-variance"
LR_SKIPPED = "skipped"

REPORTS_NAME = "reports.jsonl"
QUARANTINE_NAME = "quarantine.jsonl"


@dataclass(frozen=True)
class AnalysisConfig:
    seed: int = 0
    n_sims: int = DEFAULT_SIMS
    a: int = 1
    ingest: IngestConfig = IngestConfig()

    def fingerprint(self):
        return {
            "seed": self.seed,
            "n_sims": self.n_sims,
            "a": self.a,
            "fold_case": self.ingest.fold_case,
            "min_tokens": self.ingest.min_tokens,
            "strip": self.ingest.strip,
        }


def text_seed(master_seed, text_id):
    """64-bit seed for one text; depends only on (master seed, text id)."""
    h = hashlib.sha256(f"{int(master_seed)}\x00{text_id}".encode()).digest()
    return int.from_bytes(h[:8], "little")


@dataclass
class FamilyReport:
    fit: FitResult
    gof: GofResult | None = None
    error: str | None = None

    @property
    def p_value(self):
        return None if self.gof is None else self.gof.p_value

    def to_dict(self):
        return {"fit": self.fit.to_dict(),
                "gof": None if self.gof is None else self.gof.to_dict(),
                "error": self.error}

    @classmethod
    def from_dict(cls, d):
        return cls(FitResult.from_dict(d["fit"]),
                   None if d["gof"] is None else GofResult.from_dict(d["gof"]), d["error"])


@dataclass
class TextReport:
    id: str
    L: int
    V: int
    families: dict
    lr: LrResult | None
    lr_status: str
    fingerprint: dict
    all_degenerate: bool = False
    r12: float | None = field(default=None)

    def family(self, kind):
        return self.families[FamilyKind(kind)]

    def to_dict(self):
        return {
            "id": self.id,
            "L": self.L,
            "V": self.V,
            "families": {k.value: v.to_dict() for k, v in self.families.items()},
            "lr": None if self.lr is None else self.lr.to_dict(),
            "lr_status": self.lr_status,
            "r12": self.r12,
            "fingerprint": self.fingerprint,
            "all_degenerate": self.all_degenerate,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        fams = {FamilyKind(k): FamilyReport.from_dict(v) for k, v in d["families"].items()}
        return cls(d["id"], d["L"], d["V"], fams,
                   None if d["lr"] is None else LrResult.from_dict(d["lr"]),
                   d["lr_status"], d["fingerprint"], d.get("all_degenerate", False), d.get("r12"))


def analyze_text(record, config=AnalysisConfig()):
    """Fit f1, f2, f3, get their Monte-Carlo p-values, then the f1-vs-f2 LR test.

    Degenerate fits are recorded in the family entry rather than raised.
    """
    data = record.frequencies
    seed = text_seed(config.seed, record.id)
    families = {}
    for kind in FAMILIES:
        fit = fit_mle(kind, data, config.a)
        if fit.status == STATUS_DEGENERATE:
            families[kind] = FamilyReport(fit, None, STATUS_DEGENERATE)
            continue
        try:
            gof = mc_pvalue(data, kind, config.a, config.n_sims, SamplerState(seed, _STREAM[kind]), fit=fit)
        except (DegenerateSampleError, ZipfError, ArithmeticError) as exc:
            families[kind] = FamilyReport(fit, None, f"gof-failed: {exc}")
            continue
        families[kind] = FamilyReport(fit, gof)

    lr, lr_status, r12 = None, LR_SKIPPED, None
    f1, f2 = families[FamilyKind.F1], families[FamilyKind.F2]
    if not (f1.fit.degenerate or f2.fit.degenerate):
        try:
            lr = lr_test(data, f1.fit.beta, f2.fit.beta, config.a)
            lr_status, r12 = LR_OK, lr.r12
        except ZeroVarianceError as exc:
            lr_status, r12 = LR_ZERO_VARIANCE, exc.r12
    all_degenerate = all(f.fit.degenerate for f in families.values())
    return TextReport(record.id, record.L, record.V, families, lr, lr_status,
                      config.fingerprint(), all_degenerate, r12)


def _analyze_entry(args):
    entry, config = args
    text_id, L, V, path = entry
    try:
        freqs = read_frequency_file(path)
        if freqs.L != L or freqs.N != V:
            raise ZipfError(f"sidecar totals (L={freqs.L}, V={freqs.N}) disagree with manifest")
        report = analyze_text(TextRecord(text_id, L, V, freqs), config)
        return text_id, report.to_json(), None
    except Exception as exc:  # quarantined, the run goes on
        return text_id, None, f"{type(exc).__name__}: {exc}"


def run_corpus(entries, config=AnalysisConfig(), jobs=1, out_dir=None):
    """Analyze every manifest entry ``(id, L, V, sidecar path)``.

    Returns ``(reports, quarantined)`` with reports sorted by text id.  Results
    do not depend on ``jobs`` or completion order.  With ``out_dir`` the
    reports go to ``reports.jsonl`` and failures to ``quarantine.jsonl``.
    """
    entries = sorted(entries, key=lambda e: e[0])
    if not entries:
        log.warning("empty manifest: nothing to analyze")
    work = [(e, config) for e in entries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_analyze_entry, work, chunksize=max(1, len(work) // (8 * jobs))))
    else:
        results = [_analyze_entry(w) for w in work]
    results.sort(key=lambda r: r[0])
    lines = [(tid, js) for tid, js, err in results if js is not None]
    quarantined = [{"id": tid, "reason": err} for tid, js, err in results if err is not None]
    for q in quarantined:
        log.warning("quarantined %s: %s", q["id"], q["reason"])
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / REPORTS_NAME).write_text("".join(js + "\n" for _, js in lines))
        (out_dir / QUARANTINE_NAME).write_text("".join(json.dumps(q, sort_keys=True) + "\n" for q in quarantined))
    reports = [TextReport.from_dict(json.loads(js)) for _, js in lines]
    return reports, quarantined


def analyze_records(records, config=AnalysisConfig()):
    """In-memory variant of run_corpus for records already built."""
    return [analyze_text(r, config) for r in sorted(records, key=lambda r: r.id)]


def load_reports(path):
    with open(path) as fh:
        return [TextReport.from_dict(json.loads(line)) for line in fh if line.strip()]
