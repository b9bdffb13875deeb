"""Part-of-speech attribution of alignment errors.

Tags come from external taggers as TSV or CoNLL-U files. Substitutions and
deletions are charged to the reference word's tag, insertions to the
inserted hypothesis word's tag. Per-tag tallies are expressed as a
percentage of that tag's reference occurrences, so insertion-heavy tags
can exceed 100%.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from .core import Alignment, AlignOp, PosalignError, Token, Utterance, symbol_text

logger = logging.getLogger(__name__)

UPOS_TAGS = frozenset(
    "adj adp adv aux cconj det intj noun num part pron propn punct sconj sym verb x space".split()
)
# Fine-grained labels of the Arabic (CAMeL) tagger, reported unmapped.
EXTENDED_TAGS = frozenset(
    """noun_prop noun_quant verb_pseudo part_det part_neg part_voc part_verb part_focus
    part_interrog part_fut pron_dem pron_rel pron_interrog pron_exclam conj conj_sub
    adv_rel adv_interrog interj foreign abbrev prep punc unknown""".split()
)
KNOWN_TAGS = UPOS_TAGS | EXTENDED_TAGS

WEIGHT_PRESETS = ("tamil", "arabic", "russian")


class TagFileError(PosalignError):
    pass


class TagMismatchError(PosalignError):
    pass


class MissingTagsError(PosalignError):
    pass


def normalize_tag(label: str) -> str:
    tag = label.strip().lower()
    if not tag:
        raise ValueError("empty PoS tag")
    return tag


def is_known_tag(label: str) -> bool:
    return normalize_tag(label) in KNOWN_TAGS


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    tag: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", normalize_tag(self.tag))


@dataclass(frozen=True)
class PosErrorRecord:
    ref_word: Optional[Any]
    hyp_word: Optional[Any]
    op: AlignOp
    tag: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "op", AlignOp(self.op))
        object.__setattr__(self, "tag", normalize_tag(self.tag))
        if self.op is AlignOp.MATCH:
            raise ValueError("matches carry no error record")

    def as_tuple(self) -> tuple[Optional[str], Optional[str], str, str]:
        ref = None if self.ref_word is None else symbol_text(self.ref_word)
        hyp = None if self.hyp_word is None else symbol_text(self.hyp_word)
        return ref, hyp, self.op.value, self.tag


@dataclass(frozen=True)
class PosRow:
    tag: str
    occurrences: int
    d: int = 0
    s: int = 0
    i: int = 0

    @property
    def errors(self) -> int:
        return self.d + self.s + self.i

    @property
    def known(self) -> bool:
        return self.tag in KNOWN_TAGS

    def pct(self, count: int) -> Optional[Fraction]:
        if self.occurrences == 0:
            return None
        return Fraction(count * 100, self.occurrences)

    @property
    def total_pct(self) -> Optional[Fraction]:
        """(D + S + I) * 100 / occurrences, or None when the tag never occurs in the reference."""
        return self.pct(self.errors)

    def to_dict(self) -> dict:
        pct = self.total_pct
        return {
            "tag": self.tag,
            "count": self.occurrences,
            "D": self.d,
            "S": self.s,
            "I": self.i,
            "total_pct": None if pct is None else round(float(pct), 2),
            "known": self.known,
        }


def _rank_key(row: PosRow):
    pct = row.total_pct
    return (pct is None, -(pct or 0), row.tag)


@dataclass(frozen=True)
class PosReport:
    rows: tuple[PosRow, ...] = ()

    def __getitem__(self, tag: str) -> PosRow:
        tag = normalize_tag(tag)
        for row in self.rows:
            if row.tag == tag:
                return row
        raise KeyError(tag)

    def __contains__(self, tag: str) -> bool:
        return any(row.tag == normalize_tag(tag) for row in self.rows)

    @property
    def totals(self) -> tuple[int, int, int]:
        return (
            sum(r.d for r in self.rows),
            sum(r.s for r in self.rows),
            sum(r.i for r in self.rows),
        )

    @property
    def unknown_tags(self) -> list[str]:
        return sorted(r.tag for r in self.rows if not r.known)

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "unknown_tags": self.unknown_tags,
        }


@dataclass(frozen=True)
class WeightTable:
    """Per-tag scalar weights; tags absent from the table weigh 1.0."""

    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for tag, w in self.weights.items():
            w = float(w)
            if not w > 0:
                raise ValueError(f"weight for {tag!r} must be positive, got {w}")
            clean[normalize_tag(tag)] = w
        object.__setattr__(self, "weights", clean)

    def weight(self, tag: Optional[str]) -> float:
        if tag is None:
            return 1.0
        return self.weights.get(normalize_tag(tag), 1.0)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "WeightTable":
        with open(path, encoding="utf-8-sig") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: weight table must be a JSON object of tag -> weight")
        return cls(data)

    @classmethod
    def preset(cls, name: str) -> "WeightTable":
        """Weights used for the Tamil, Arabic and Russian PoS-aware models."""
        if name not in WEIGHT_PRESETS:
            raise ValueError(f"unknown weight preset {name!r}; choose from {', '.join(WEIGHT_PRESETS)}")
        text = resources.files("posalign").joinpath("data", f"weights_{name}.json").read_text("utf-8")
        return cls(json.loads(text))

    @classmethod
    def load(cls, source: str) -> "WeightTable":
        if source in WEIGHT_PRESETS and not Path(source).exists():
            return cls.preset(source)
        return cls.from_json(source)


TagMap = dict[str, list[TaggedToken]]


def _tagged(word: str, tag: str, where: str) -> TaggedToken:
    try:
        return TaggedToken(Token(word), tag)
    except ValueError as exc:
        raise TagFileError(f"{where}: {exc}") from None


def parse_tsv_tags(lines: Iterable[str], source: str = "<tsv>") -> TagMap:
    """Parse ``utt_id<TAB>token_index<TAB>token<TAB>tag`` rows (1-based indices)."""
    out: TagMap = {}
    expected_index: dict[str, int] = {}
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise TagFileError(f"{source}:{lineno}: expected 4 tab-separated columns, got {len(cols)}")
        utt, index, word, tag = cols
        if lineno == 1 and not index.strip().isdigit():
            continue  # header row
        where = f"{source}:{lineno}"
        try:
            idx = int(index)
        except ValueError:
            raise TagFileError(f"{where}: token_index {index!r} is not an integer") from None
        want = expected_index.get(utt, 1)
        if idx != want:
            raise TagFileError(f"{where}: utterance {utt!r} expected token_index {want}, got {idx}")
        expected_index[utt] = want + 1
        out.setdefault(utt, []).append(_tagged(word, tag, where))
    return out


_SENT_ID = re.compile(r"^#\s*(?:sent_id|utt_id)\s*=\s*(\S.*?)\s*$")


def parse_conllu_tags(lines: Iterable[str], source: str = "<conllu>") -> TagMap:
    """Read FORM and UPOS columns; the utterance id comes from ``# sent_id = ...``."""
    out: TagMap = {}
    utt: Optional[str] = None
    current: list[TaggedToken] = []

    def flush(lineno: int) -> None:
        nonlocal utt, current
        if current:
            if utt is None:
                raise TagFileError(f"{source}:{lineno}: sentence without a sent_id comment")
            if utt in out:
                raise TagFileError(f"{source}:{lineno}: duplicate sent_id {utt!r}")
            out[utt] = current
        utt, current = None, []

    lineno = 0
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush(lineno)
            continue
        if line.startswith("#"):
            m = _SENT_ID.match(line)
            if m:
                utt = m.group(1)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise TagFileError(f"{source}:{lineno}: expected 10 CoNLL-U columns, got {len(cols)}")
        token_id = cols[0]
        if "-" in token_id or "." in token_id:
            continue  # multiword ranges and empty nodes
        current.append(_tagged(cols[1], cols[3], f"{source}:{lineno}"))
    flush(lineno + 1)
    return out


def ingest_tags(path: Union[str, Path]) -> TagMap:
    """Load a TSV or CoNLL-U tag file into ``{utterance id: [TaggedToken, ...]}``."""
    path = Path(path)
    with open(path, encoding="utf-8-sig") as f:
        lines = f.readlines()
    if path.suffix.lower() == ".conllu" or _looks_like_conllu(lines):
        tags = parse_conllu_tags(lines, str(path))
    else:
        tags = parse_tsv_tags(lines, str(path))
    unknown = sorted({t.tag for seq in tags.values() for t in seq} - KNOWN_TAGS)
    if unknown:
        logger.warning("%s: unknown PoS tags %s", path, ", ".join(unknown))
    return tags


def _looks_like_conllu(lines: Sequence[str]) -> bool:
    for line in lines:
        if not line.strip():
            continue
        return line.startswith("#") or len(line.rstrip("\r\n").split("\t")) == 10
    return False


def check_tags(
    tagged: Sequence[TaggedToken],
    utterance: Utterance,
    normalizer: Optional[Callable[[str], str]] = None,
) -> list[str]:
    """Match a tag sequence against an utterance's tokens and return the bare tags.

    ``normalizer`` is the transcript's normalization; it is applied to the
    tagged words too, and words it empties (e.g. stripped punctuation) are
    dropped together with their tags.

    Raises:
        TagMismatchError: on a length or token-text mismatch, naming the
            utterance and the 1-based token index.
    """
    pairs = []
    for t in tagged:
        word = normalizer(t.token.text) if normalizer else t.token.text
        if word:
            pairs.append((word, t.tag))
    if len(pairs) != len(utterance.tokens):
        raise TagMismatchError(
            f"utterance {utterance.id!r}: {len(pairs)} tagged tokens for "
            f"{len(utterance.tokens)} transcript tokens"
        )
    for k, ((word, _), token) in enumerate(zip(pairs, utterance.tokens), 1):
        if word != token.text:
            raise TagMismatchError(
                f"utterance {utterance.id!r}, token {k}: tagged word {word!r} "
                f"does not match transcript word {token.text!r}"
            )
    return [tag for _, tag in pairs]


def attribute_pos(
    a: Alignment,
    ref_tags: Sequence[str],
    hyp_tags: Optional[Sequence[str]] = None,
) -> list[PosErrorRecord]:
    """One record per non-match pair, tagged by the reference word (S, D) or inserted word (I)."""
    n_ref = sum(1 for p in a.pairs if p.ref is not None)
    n_hyp = sum(1 for p in a.pairs if p.hyp is not None)
    if len(ref_tags) != n_ref:
        raise TagMismatchError(
            f"utterance {a.utterance_id!r}: {len(ref_tags)} reference tags for {n_ref} reference words"
        )
    if hyp_tags is not None and len(hyp_tags) != n_hyp:
        raise TagMismatchError(
            f"utterance {a.utterance_id!r}: {len(hyp_tags)} hypothesis tags for {n_hyp} hypothesis words"
        )
    records = []
    ri = hi = 0
    for p in a.pairs:
        if p.op is AlignOp.INS:
            if hyp_tags is None:
                raise MissingTagsError(
                    f"utterance {a.utterance_id!r}: insertion of {symbol_text(p.hyp)!r} "
                    "cannot be attributed without hypothesis tags"
                )
            records.append(PosErrorRecord(None, p.hyp, p.op, normalize_tag(hyp_tags[hi])))
        elif p.op is not AlignOp.MATCH:
            records.append(PosErrorRecord(p.ref, p.hyp, p.op, normalize_tag(ref_tags[ri])))
        ri += p.ref is not None
        hi += p.hyp is not None
    return records


def count_tags(tag_lists: Iterable[Sequence[str]]) -> Counter:
    return Counter(normalize_tag(t) for tags in tag_lists for t in tags)


def aggregate(records: Iterable[PosErrorRecord], ref_tag_counts: Mapping[str, int]) -> PosReport:
    """Tally D/S/I per tag; rows are ranked by descending total percentage."""
    tallies: dict[str, Counter] = {}
    for rec in records:
        tallies.setdefault(normalize_tag(rec.tag), Counter())[rec.op] += 1
    occurrences = Counter({normalize_tag(t): n for t, n in ref_tag_counts.items()})
    rows = []
    for tag in set(occurrences) | set(tallies):
        c = tallies.get(tag, Counter())
        rows.append(PosRow(tag, occurrences[tag], c[AlignOp.DEL], c[AlignOp.SUB], c[AlignOp.INS]))
    undefined = [r.tag for r in rows if r.total_pct is None and r.errors]
    if undefined:
        logger.info("tags with errors but no reference occurrences: %s", ", ".join(sorted(undefined)))
    return PosReport(tuple(sorted(rows, key=_rank_key)))


def export_weights(
    ref_tags: Mapping[str, Sequence[Optional[str]]],
    table: WeightTable,
) -> dict[str, list[float]]:
    """Token-wise weights ``{utterance id: [w, ...]}``; untagged tokens weigh 1.0."""
    return {utt: [table.weight(t) for t in ref_tags[utt]] for utt in sorted(ref_tags)}


def dumps_weights(doc: Mapping[str, Sequence[float]]) -> str:
    """Serialize a token-weight document with two-decimal weights and sorted keys."""
    lines = []
    for utt in sorted(doc):
        values = ", ".join(f"{w:.2f}" for w in doc[utt])
        lines.append(f"  {json.dumps(utt, ensure_ascii=False)}: [{values}]")
    if not lines:
        return "{}\n"
    return "{\n" + ",\n".join(lines) + "\n}\n"
