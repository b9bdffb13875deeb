"""End-to-end scoring run: read transcripts, align, render, count, attribute PoS."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Optional

from . import __version__
from .aligner import align, merge_indel
from .core import Alignment, CostConfig, PosalignError, normalize
from .metrics import (
    ErrorCounts,
    UndefinedRateError,
    char_alignment,
    count_errors,
    format_percent,
    ser_from_counts,
    wer,
)
from .pos import (
    PosErrorRecord,
    PosReport,
    WeightTable,
    aggregate,
    attribute_pos,
    check_tags,
    count_tags,
    export_weights,
    ingest_tags,
)
from .renderer import BIDI_NOTE, RenderedAlignment, has_rtl, render
from .trn import pair, parse_plain, parse_trn, repair_sclite
from .width import SEGMENTER, UNICODE_VERSION, string_width

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("pretty", "json", "tsv")


class ConfigError(PosalignError):
    pass


@dataclass
class RunConfig:
    ref_path: str
    hyp_path: str
    ref_tags_path: Optional[str] = None
    hyp_tags_path: Optional[str] = None
    costs: CostConfig = field(default_factory=CostConfig)
    delta: int = 1
    merge: bool = True
    strip_punct: bool = False
    lowercase: bool = False
    repair_sclite: bool = False
    plain: bool = False
    pos: bool = False
    weights: Optional[str] = None
    output_format: str = "pretty"

    def validate(self) -> None:
        for label, path in (
            ("reference", self.ref_path),
            ("hypothesis", self.hyp_path),
            ("reference tags", self.ref_tags_path),
            ("hypothesis tags", self.hyp_tags_path),
        ):
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{label} file not found: {path}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {', '.join(OUTPUT_FORMATS)}")
        if self.delta < 0:
            raise ConfigError("delta must be non-negative")
        if self.pos and self.ref_tags_path is None:
            raise ConfigError("PoS analysis requested but no reference tag file given (--ref-tags)")
        if self.hyp_tags_path is not None and self.ref_tags_path is None:
            raise ConfigError("--hyp-tags requires --ref-tags")

    def to_dict(self) -> dict:
        return {
            "ref": self.ref_path,
            "hyp": self.hyp_path,
            "ref_tags": self.ref_tags_path,
            "hyp_tags": self.hyp_tags_path,
            "costs": self.costs.as_dict(),
            "delta": self.delta,
            "merge": self.merge,
            "strip_punct": self.strip_punct,
            "lowercase": self.lowercase,
            "repair_sclite": self.repair_sclite,
            "plain": self.plain,
            "weights": self.weights,
        }


@dataclass
class UtteranceResult:
    id: str
    alignment: Alignment
    raw_alignment: Alignment
    rendered: RenderedAlignment
    counts: ErrorCounts
    counts_pre_merge: ErrorCounts
    char_counts: ErrorCounts
    char_counts_pre_merge: ErrorCounts
    records: list[PosErrorRecord] = field(default_factory=list)

    @property
    def merges(self) -> int:
        return len(self.raw_alignment) - len(self.alignment)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "ref": [t.text for t in self.alignment.ref_items],
            "hyp": [t.text for t in self.alignment.hyp_items],
            "alignment": [{"ref": r, "hyp": h, "op": o} for r, h, o in self.alignment.as_tuples()],
            "rendered": self.rendered.to_dict(),
            "counts": self.counts.to_dict(),
            "counts_pre_merge": self.counts_pre_merge.to_dict(),
            "char_counts": self.char_counts.to_dict(),
            "char_counts_pre_merge": self.char_counts_pre_merge.to_dict(),
            "merges": self.merges,
            "pos_errors": [
                {"ref": r, "hyp": h, "op": o, "tag": t} for r, h, o, t in (rec.as_tuple() for rec in self.records)
            ],
        }


def _rate(fn, counts: ErrorCounts) -> Optional[Fraction]:
    try:
        return fn(counts)
    except UndefinedRateError:
        return None


def _pct(rate: Optional[Fraction]) -> Optional[float]:
    return None if rate is None else float(rate * 100)


@dataclass
class Report:
    meta: dict
    utterances: list[UtteranceResult]
    pos_report: Optional[PosReport] = None
    weights: Optional[dict[str, list[float]]] = None
    errors: list[dict] = field(default_factory=list)

    def total(self, attr: str) -> ErrorCounts:
        return ErrorCounts.total(getattr(u, attr) for u in self.utterances)

    def corpus(self) -> dict:
        counts = self.total("counts")
        raw = self.total("counts_pre_merge")
        chars = self.total("char_counts")
        chars_raw = self.total("char_counts_pre_merge")
        return {
            "counts": counts.to_dict(),
            "counts_pre_merge": raw.to_dict(),
            "char_counts": chars.to_dict(),
            "char_counts_pre_merge": chars_raw.to_dict(),
            "merges": sum(u.merges for u in self.utterances),
            "wer": _pct(_rate(wer, counts)),
            "wer_pre_merge": _pct(_rate(wer, raw)),
            "cer": _pct(_rate(wer, chars)),
            "cer_pre_merge": _pct(_rate(wer, chars_raw)),
            "ser": _pct(_rate(ser_from_counts, counts)),
            "ser_pre_merge": _pct(_rate(ser_from_counts, raw)),
        }

    @property
    def exit_status(self) -> int:
        return 1 if self.errors else 0

    def to_dict(self) -> dict:
        meta = dict(self.meta)
        meta["errors"] = list(self.errors)
        return {
            "meta": meta,
            "corpus": self.corpus(),
            "utterances": [u.to_dict() for u in self.utterances],
            "pos_report": None if self.pos_report is None else self.pos_report.to_dict(),
            "weights": self.weights,
        }

    def format(self, output_format: str) -> str:
        if output_format == "json":
            return format_json(self)
        if output_format == "tsv":
            return format_tsv(self)
        return format_pretty(self)


def format_json(report: Report) -> str:
    return json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n"


def format_tsv(report: Report) -> str:
    lines = ["tag\tcount\tD\tS\tI\ttotal_pct"]
    if report.pos_report is not None:
        for row in report.pos_report.rows:
            pct = row.total_pct
            shown = "NA" if pct is None else f"{float(pct):.2f}"
            lines.append(f"{row.tag}\t{row.occurrences}\t{row.d}\t{row.s}\t{row.i}\t{shown}")
    return "\n".join(lines) + "\n"


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(string_width(r[k]) for r in rows) for k in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [c + " " * (w - string_width(c)) for c, w in zip(r, widths)]
        out.append("  ".join(cells).rstrip())
    return out


def _show_pct(pct: Optional[Fraction]) -> str:
    return "n/a" if pct is None else format_percent(pct / 100)


def format_pretty(report: Report) -> str:
    out: list[str] = []
    for u in report.utterances:
        out.append(f"id: {u.id}")
        for label, line in zip(("REF: ", "HYP: ", "EVAL:"), u.rendered.lines):
            out.append(f"{label} {line}".rstrip())
        out.append("")
    corpus = report.corpus()
    c = corpus["counts"]

    def show(key: str) -> str:
        value = corpus[key]
        return "n/a" if value is None else f"{value:.1f}%"

    out.append(
        f"utterances: {c['n_utts']}  ref words: {c['n_ref']}  "
        f"S: {c['subs']}  D: {c['dels']}  I: {c['ins']}  merges: {corpus['merges']}"
    )
    out.append(
        f"WER: {show('wer')} (pre-merge {show('wer_pre_merge')})  "
        f"CER: {show('cer')}  SER: {show('ser')}"
    )
    if report.pos_report is not None and report.pos_report.rows:
        out.append("")
        rows = [["tag", "count", "D", "S", "I", "total%"]]
        for row in report.pos_report.rows:
            rows.append(
                [row.tag, str(row.occurrences), str(row.d), str(row.s), str(row.i), _show_pct(row.total_pct)]
            )
        out.extend(_table(rows))
    for note in report.meta.get("notes", []):
        out.append(f"note: {note}")
    for err in report.errors:
        out.append(f"error: [{err['utterance']}] {err['stage']}: {err['message']}")
    return "\n".join(out) + "\n"


def _load_tags(path: Optional[str], utterances, normalizer, side: str, errors: list) -> Optional[dict]:
    if path is None:
        return None
    tagged = ingest_tags(path)
    out = {}
    for utt in utterances:
        if utt.id not in tagged:
            if utt.tokens:
                errors.append({"utterance": utt.id, "stage": f"{side}-tags", "message": "no tags for utterance"})
            else:
                out[utt.id] = []
            continue
        try:
            out[utt.id] = check_tags(tagged[utt.id], utt, normalizer)
        except PosalignError as exc:
            errors.append({"utterance": utt.id, "stage": f"{side}-tags", "message": str(exc)})
    return out


def run(config: RunConfig) -> Report:
    """Execute one scoring run and return the report (nothing is written)."""
    config.validate()
    normalizer = partial(normalize, strip_punct=config.strip_punct, lowercase=config.lowercase)
    reader = parse_plain if config.plain else parse_trn
    refs = reader(config.ref_path, normalizer)
    hyps = reader(config.hyp_path, normalizer)
    pairs = pair(refs, hyps)
    hyp_ids = {h.id for h in hyps}

    errors: list[dict] = []
    ref_tags = _load_tags(config.ref_tags_path, [r for r, _ in pairs], normalizer, "ref", errors)
    hyp_tags = _load_tags(config.hyp_tags_path, [h for _, h in pairs], normalizer, "hyp", errors)

    results: list[UtteranceResult] = []
    all_records: list[PosErrorRecord] = []
    rtl = False
    for ref_utt, hyp_utt in pairs:
        ref_tokens, hyp_tokens = list(ref_utt.tokens), list(hyp_utt.tokens)
        if config.repair_sclite:
            ref_tokens, hyp_tokens = repair_sclite(ref_tokens, hyp_tokens)
        raw = align(ref_tokens, hyp_tokens, config.costs, merge=False, utterance_id=ref_utt.id)
        final = merge_indel(raw) if config.merge else raw
        ref_text = " ".join(t.text for t in ref_tokens)
        hyp_text = " ".join(t.text for t in hyp_tokens)
        raw_chars = char_alignment(ref_text, hyp_text)
        chars = merge_indel(raw_chars) if config.merge else raw_chars
        result = UtteranceResult(
            id=ref_utt.id,
            alignment=final,
            raw_alignment=raw,
            rendered=render(final, config.delta),
            counts=count_errors(final),
            counts_pre_merge=count_errors(raw),
            char_counts=count_errors(chars),
            char_counts_pre_merge=count_errors(raw_chars),
        )
        rtl = rtl or has_rtl(final)
        if ref_tags is not None and ref_utt.id in ref_tags:
            if config.repair_sclite and len(ref_tokens) != len(ref_utt.tokens):
                errors.append({"utterance": ref_utt.id, "stage": "pos", "message": "tags cannot follow placeholder repair"})
            else:
                h_tags = None if hyp_tags is None else hyp_tags.get(hyp_utt.id)
                try:
                    result.records = attribute_pos(final, ref_tags[ref_utt.id], h_tags)
                except PosalignError as exc:
                    errors.append({"utterance": ref_utt.id, "stage": "pos", "message": str(exc)})
                all_records.extend(result.records)
        results.append(result)

    pos_report = None
    if ref_tags is not None:
        pos_report = aggregate(all_records, count_tags(ref_tags.values()))

    weights = None
    if config.weights is not None:
        table = WeightTable.load(config.weights)
        per_utt = {}
        for ref_utt, _ in pairs:
            tags = None if ref_tags is None else ref_tags.get(ref_utt.id)
            per_utt[ref_utt.id] = list(tags) if tags is not None else [None] * len(ref_utt.tokens)
        weights = export_weights(per_utt, table)

    notes = [BIDI_NOTE] if rtl else []
    missing = [r.id for r, _ in pairs if r.id not in hyp_ids]
    meta = {
        "tool": "posalign",
        "version": __version__,
        "unicode_version": UNICODE_VERSION,
        "grapheme_segmenter": SEGMENTER,
        "config": config.to_dict(),
        "missing_hypotheses": missing,
        "notes": notes,
    }
    return Report(meta, results, pos_report, weights, errors)
