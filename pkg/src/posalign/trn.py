"""Transcript input: trn files, REF/HYP pairing and sclite placeholder repair."""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .core import PosalignError, Token, Utterance, tokenize

logger = logging.getLogger(__name__)

_TRN_LINE = re.compile(r"^(?P<text>.*?)\s*\((?P<id>[^()\s][^()]*)\)\s*$")


class TrnParseError(PosalignError):
    pass


class PairingError(PosalignError):
    pass


def _read_lines(source: Union[str, Path, Iterable[str]]) -> list[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8-sig") as f:
            return f.read().splitlines()
    return [line.lstrip("\ufeff") if k == 0 else line for k, line in enumerate(source)]


def parse_trn(
    source: Union[str, Path, Iterable[str]],
    normalizer: Optional[Callable[[str], str]] = None,
) -> list[Utterance]:
    """Parse ``word word ... (utt-id)`` lines into utterances, in file order.

    Raises:
        TrnParseError: for a line without a trailing ``(id)`` or a repeated id.
    """
    name = str(source) if isinstance(source, (str, Path)) else "<trn>"
    seen: dict[str, int] = {}
    out = []
    for lineno, line in enumerate(_read_lines(source), 1):
        if not line.strip():
            continue
        m = _TRN_LINE.match(line)
        if m is None:
            raise TrnParseError(f"{name}:{lineno}: missing trailing '(utterance-id)'")
        utt_id = m.group("id").strip()
        if utt_id in seen:
            raise TrnParseError(
                f"{name}:{lineno}: duplicate utterance id {utt_id!r} (first seen on line {seen[utt_id]})"
            )
        seen[utt_id] = lineno
        text = m.group("text")
        if normalizer is not None:
            text = normalizer(text)
        out.append(Utterance(utt_id, tuple(tokenize(text))))
    return out


def parse_plain(
    source: Union[str, Path, Iterable[str]],
    normalizer: Optional[Callable[[str], str]] = None,
) -> list[Utterance]:
    """One utterance per line, ids ``line-1``, ``line-2``, ... by line number."""
    out = []
    for lineno, line in enumerate(_read_lines(source), 1):
        text = normalizer(line) if normalizer is not None else line
        out.append(Utterance(f"line-{lineno}", tuple(tokenize(text))))
    return out


def pair(refs: Sequence[Utterance], hyps: Sequence[Utterance]) -> list[tuple[Utterance, Utterance]]:
    """Pair utterances by id, in reference order.

    A reference without a hypothesis is paired with an empty one (every word
    becomes a deletion).

    Raises:
        PairingError: if a hypothesis id has no reference.
    """
    ref_ids = {u.id for u in refs}
    unknown = [h.id for h in hyps if h.id not in ref_ids]
    if unknown:
        raise PairingError(f"hypothesis utterance(s) without a reference: {', '.join(unknown)}")
    by_id = {h.id: h for h in hyps}
    missing = [r.id for r in refs if r.id not in by_id]
    if missing:
        logger.warning("%d reference utterance(s) have no hypothesis: %s", len(missing), ", ".join(missing))
    return [(r, by_id.get(r.id, Utterance(r.id, ()))) for r in refs]


def is_placeholder(word: str) -> bool:
    return bool(word) and set(word) == {"*"}


def repair_sclite(
    ref: Union[str, Sequence[Token]],
    hyp: Union[str, Sequence[Token]],
) -> tuple[list[Token], list[Token]]:
    """Drop sclite's all-asterisk gap placeholders so the words can be realigned.

    Either side may be a raw line or an already tokenized sequence.
    """
    ref_tokens = tokenize(ref) if isinstance(ref, str) else ref
    hyp_tokens = tokenize(hyp) if isinstance(hyp, str) else hyp
    return (
        [t for t in ref_tokens if not is_placeholder(t.text)],
        [t for t in hyp_tokens if not is_placeholder(t.text)],
    )
