"""Plain-text ingestion: Gutenberg boilerplate stripping, letters-only tokens, frequency counts."""
from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import regex

from .errors import IngestRejection, NoDelimitersError
from .estimation import FrequencyVector

log = logging.getLogger(__name__)

REJECT_SHORT = "short-text"
REJECT_IO = "io-error"
REJECT_NO_DELIMITERS = "no-delimiters"

MANIFEST_NAME = "manifest.csv"
INGEST_CONFIG_NAME = "ingest.json"
FREQ_DIR = "freqs"
FREQ_SUFFIX = ".freq"

# "*** START OF THE PROJECT GUTENBERG EBOOK ..." and the THIS/no-article variants
_START = regex.compile(r"\*\*\*\s*START\s+OF\b.*PROJECT\s+GUTENBERG", regex.IGNORECASE)
_END = regex.compile(r"\*\*\*\s*END\s+OF\b.*PROJECT\s+GUTENBERG", regex.IGNORECASE)
_WORD = regex.compile(r"\p{L}+")
_NON_LETTER = regex.compile(r"\P{L}+")


@dataclass(frozen=True)
class IngestConfig:
    fold_case: bool = True
    min_tokens: int = 100
    strip: bool = True

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TextRecord:
    id: str
    length_tokens: int
    vocabulary: int
    frequencies: FrequencyVector

    @property
    def L(self):
        return self.length_tokens

    @property
    def V(self):
        return self.vocabulary


def strip_boilerplate(raw):
    """Body strictly between the Gutenberg START and END marker lines.

    Raises NoDelimitersError when either marker is missing.
    """
    lines = raw.splitlines(keepends=True)
    start = next((i for i, line in enumerate(lines) if _START.search(line)), None)
    if start is None:
        raise NoDelimitersError("START marker not found")
    end = next((j for j in range(start + 1, len(lines)) if _END.search(lines[j])), None)
    if end is None:
        raise NoDelimitersError("END marker not found")
    body = "".join(lines[start + 1:end])
    # the line break that terminates the last body line belongs to the END marker line
    if body.endswith("\r\n"):
        body = body[:-2]
    elif body.endswith(("\n", "\r")):
        body = body[:-1]
    return body


def tokenize(body, fold_case=True):
    """Maximal runs of Unicode letters (category L), optionally case-folded.

    Case folding can introduce non-letters (e.g. a combining dot); those are
    dropped from the folded token so every token stays letters-only.
    """
    tokens = _WORD.findall(body)
    if not fold_case:
        return tokens
    out = []
    for tok in tokens:
        tok = tok.casefold()
        if _NON_LETTER.search(tok):
            tok = _NON_LETTER.sub("", tok)
        if tok:
            out.append(tok)
    return out


def word_frequencies(tokens):
    """Counts of each distinct token, sorted descending (index + 1 is the rank)."""
    counts = Counter(tokens)
    values = np.array(sorted(counts.values(), reverse=True), dtype=np.int64)
    return FrequencyVector(values)


def ingest_text(raw, text_id, config=IngestConfig()):
    body = strip_boilerplate(raw) if config.strip else raw
    tokens = tokenize(body, config.fold_case)
    if len(tokens) <= config.min_tokens:
        raise IngestRejection(REJECT_SHORT, f"{len(tokens)} tokens <= {config.min_tokens}")
    freqs = word_frequencies(tokens)
    return TextRecord(text_id, len(tokens), freqs.N, freqs)


def ingest(source, config=IngestConfig(), text_id=None):
    """Read a UTF-8 document (path or binary/text stream) and build its TextRecord.

    Raises IngestRejection with reason ``io-error``, ``no-delimiters`` or
    ``short-text`` (L <= min_tokens).
    """
    try:
        if isinstance(source, (str, Path)):
            path = Path(source)
            text_id = text_id or path.stem
            data = path.read_bytes()
        else:
            data = source.read()
        raw = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    except (OSError, UnicodeDecodeError) as exc:
        raise IngestRejection(REJECT_IO, str(exc)) from exc
    return ingest_text(raw, text_id or "stream", config)


def write_frequency_file(path, freqs):
    values = freqs.sorted_desc() if isinstance(freqs, FrequencyVector) else sorted(freqs, reverse=True)
    Path(path).write_text("".join(f"{int(v)}\n" for v in values))


def read_frequency_file(path):
    """One positive integer per line; blank lines are ignored."""
    text = Path(path).read_text()
    return FrequencyVector([int(line) for line in text.split() if line])


def ingest_directory(in_dir, out_dir, config=IngestConfig()):
    """Ingest every ``*.txt`` under ``in_dir``; write sidecars, manifest and config.

    Returns a Counter of outcomes ("accepted" plus one key per rejection reason).
    """
    in_dir, out_dir = Path(in_dir), Path(out_dir)
    (out_dir / FREQ_DIR).mkdir(parents=True, exist_ok=True)
    tally = Counter()
    rows = []
    for path in sorted(in_dir.rglob("*.txt")):
        text_id = path.relative_to(in_dir).with_suffix("").as_posix().replace("/", "__")
        try:
            rec = ingest(path, config, text_id)
        except IngestRejection as rej:
            log.info("rejected %s: %s", text_id, rej)
            tally[rej.reason] += 1
            rows.append({"id": text_id, "L": "", "V": "", "rejection_reason": rej.reason})
            continue
        write_frequency_file(out_dir / FREQ_DIR / f"{text_id}{FREQ_SUFFIX}", rec.frequencies)
        tally["accepted"] += 1
        rows.append({"id": text_id, "L": rec.L, "V": rec.V, "rejection_reason": ""})
    with open(out_dir / MANIFEST_NAME, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["id", "L", "V", "rejection_reason"])
        w.writeheader()
        w.writerows(rows)
    (out_dir / INGEST_CONFIG_NAME).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    return tally


def load_manifest(corpus_dir):
    """Accepted (id, L, V, sidecar path) rows of an ingested corpus directory."""
    corpus_dir = Path(corpus_dir)
    out = []
    with open(corpus_dir / MANIFEST_NAME, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["rejection_reason"]:
                continue
            out.append((row["id"], int(row["L"]), int(row["V"]),
                        corpus_dir / FREQ_DIR / f"{row['id']}{FREQ_SUFFIX}"))
    return out


def load_ingest_config(corpus_dir):
    p = Path(corpus_dir) / INGEST_CONFIG_NAME
    if not p.exists():
        return None
    return IngestConfig(**json.loads(p.read_text()))
