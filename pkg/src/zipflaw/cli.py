"""Command-line entry point: ``zipf {ingest,fit,gof,lr,sample,run,aggregate}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .aggregate import DEFAULT_BIN_SIZE, DEFAULT_LEVELS, aggregate
from .corpus import IngestConfig, ingest_directory, load_ingest_config, load_manifest, read_frequency_file
from .distributions import FamilyKind, ZipfModel
from .errors import ZipfError
from .estimation import fit_mle
from .gof import DEFAULT_SIMS, mc_pvalue
from .model_selection import lr_test
from .pipeline import AnalysisConfig, load_reports, run_corpus
from .sampling import SamplerState, sample_iid

log = logging.getLogger("zipflaw")


def _levels(s):
    return tuple(float(x) for x in s.split(",") if x.strip())


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master random seed (default 0)")
    p.add_argument("--sims", type=int, default=DEFAULT_SIMS, help="Monte-Carlo replicates per KS test")
    p.add_argument("--a", type=int, default=1, help="lower cutoff of the support (default 1)")
    p.add_argument("--levels", type=_levels, default=DEFAULT_LEVELS,
                   help="comma-separated significance levels (default 0.05,0.2,0.5)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--bin-size", type=int, default=DEFAULT_BIN_SIZE, help="texts per length bin")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="zipf", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="tokenize a directory of UTF-8 texts")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--no-fold-case", action="store_true")
    p.add_argument("--min-tokens", type=int, default=100)
    p.add_argument("--no-strip", action="store_true", help="texts are already free of Gutenberg boilerplate")

    kinds = [k.value for k in FamilyKind]
    p = sub.add_parser("fit", parents=[common], help="ML fit of one family to a frequency file")
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--input", required=True)

    p = sub.add_parser("gof", parents=[common], help="KS statistic and Monte-Carlo p-value")
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--replicates", action="store_true", help="include every replicate D in the output")

    p = sub.add_parser("lr", parents=[common], help="f1 vs f2 likelihood-ratio test")
    p.add_argument("--input", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw iid values, one per line")
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--stream", type=int, default=0, help="stream id for independent parallel draws")

    p = sub.add_parser("run", parents=[common], help="full pipeline over an ingested corpus")
    p.add_argument("--corpus", required=True, help="directory written by `zipf ingest`")
    p.add_argument("--out", dest="out_dir", required=True)

    p = sub.add_parser("aggregate", parents=[common], help="recompute aggregates from reports.jsonl")
    p.add_argument("--reports", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    return parser


def _dump(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_aggregate(reports, args, out_dir):
    agg = aggregate(reports, args.levels, args.bin_size)
    agg.write_csvs(Path(out_dir) / "aggregate")
    for note in agg.notes:
        log.warning(note)
    return agg


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except (ZipfError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1


def _dispatch(args):
    cmd = args.command
    if cmd == "ingest":
        cfg = IngestConfig(fold_case=not args.no_fold_case, min_tokens=args.min_tokens, strip=not args.no_strip)
        tally = ingest_directory(args.in_dir, args.out_dir, cfg)
        _dump(dict(tally))
    elif cmd == "fit":
        fit = fit_mle(args.kind, read_frequency_file(args.input), args.a)
        _dump(fit.to_dict())
    elif cmd == "gof":
        data = read_frequency_file(args.input)
        fit = fit_mle(args.kind, data, args.a)
        res = mc_pvalue(data, args.kind, args.a, args.sims, SamplerState(args.seed), fit=fit,
                        keep_replicates=args.replicates)
        _dump({"fit": fit.to_dict(), "gof": res.to_dict(with_replicates=args.replicates)})
    elif cmd == "lr":
        data = read_frequency_file(args.input)
        f1 = fit_mle(FamilyKind.F1, data, args.a)
        f2 = fit_mle(FamilyKind.F2, data, args.a)
        res = lr_test(data, f1.beta, f2.beta, args.a)
        _dump({"lr": res.to_dict(), "fit_f1": f1.to_dict(), "fit_f2": f2.to_dict()})
    elif cmd == "sample":
        values = sample_iid(ZipfModel(args.kind, args.beta, args.a), args.count,
                            SamplerState(args.seed, args.stream)).values
        sys.stdout.write("".join(f"{int(v)}\n" for v in values))
    elif cmd == "run":
        entries = load_manifest(args.corpus)
        ingest_cfg = load_ingest_config(args.corpus) or IngestConfig()
        config = AnalysisConfig(seed=args.seed, n_sims=args.sims, a=args.a, ingest=ingest_cfg)
        reports, quarantined = run_corpus(entries, config, jobs=args.jobs, out_dir=args.out_dir)
        agg = _write_aggregate(reports, args, args.out_dir)
        _dump({"analyzed": len(reports), "quarantined": len(quarantined), "summary": agg.summary})
    elif cmd == "aggregate":
        reports = load_reports(args.reports)
        agg = _write_aggregate(reports, args, args.out_dir)
        _dump({"analyzed": len(reports), "summary": agg.summary})
    return 0


if __name__ == "__main__":
    sys.exit(main())
