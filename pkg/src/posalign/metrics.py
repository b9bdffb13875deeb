"""Error counting and word/character/sentence error rates."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .aligner import UNIT_COSTS, align
from .core import Alignment, AlignOp, CostConfig, PosalignError
from .width import split_graphemes


class UndefinedRateError(PosalignError, ZeroDivisionError):
    """Raised when a rate has an empty denominator."""


@dataclass(frozen=True)
class ErrorCounts:
    n_ref: int = 0
    subs: int = 0
    dels: int = 0
    ins: int = 0
    n_utts: int = 0
    n_err_utts: int = 0

    def __post_init__(self) -> None:
        if min(asdict(self).values()) < 0:
            raise ValueError("counts must be non-negative")
        if self.subs + self.dels > self.n_ref:
            raise ValueError("subs + dels exceeds the number of reference tokens")
        if self.n_err_utts > self.n_utts:
            raise ValueError("more errored utterances than utterances")

    @property
    def errors(self) -> int:
        return self.subs + self.dels + self.ins

    def __add__(self, other: "ErrorCounts") -> "ErrorCounts":
        if not isinstance(other, ErrorCounts):
            return NotImplemented
        return ErrorCounts(
            self.n_ref + other.n_ref,
            self.subs + other.subs,
            self.dels + other.dels,
            self.ins + other.ins,
            self.n_utts + other.n_utts,
            self.n_err_utts + other.n_err_utts,
        )

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    @classmethod
    def total(cls, counts: Iterable["ErrorCounts"]) -> "ErrorCounts":
        return sum(counts, cls())


def count_errors(a: Alignment) -> ErrorCounts:
    subs = dels = ins = n_ref = 0
    for p in a.pairs:
        if p.ref is not None:
            n_ref += 1
        if p.op is AlignOp.SUB:
            subs += 1
        elif p.op is AlignOp.DEL:
            dels += 1
        elif p.op is AlignOp.INS:
            ins += 1
    errored = int(subs + dels + ins > 0)
    return ErrorCounts(n_ref, subs, dels, ins, n_utts=1, n_err_utts=errored)


def wer(c: ErrorCounts) -> Fraction:
    """(S + D + I) / N as an exact fraction (multiply by 100 for percent)."""
    if c.n_ref == 0:
        raise UndefinedRateError("WER is undefined for an empty reference")
    return Fraction(c.errors, c.n_ref)


def char_alignment(ref_text: str, hyp_text: str, costs: Optional[CostConfig] = None, merge: bool = False) -> Alignment:
    ref = split_graphemes(" ".join(ref_text.split()))
    hyp = split_graphemes(" ".join(hyp_text.split()))
    return align(ref, hyp, costs or UNIT_COSTS, merge=merge)


def char_counts(ref_text: str, hyp_text: str, costs: Optional[CostConfig] = None, merge: bool = False) -> ErrorCounts:
    return count_errors(char_alignment(ref_text, hyp_text, costs, merge))


def cer(ref_text: str, hyp_text: str, costs: Optional[CostConfig] = None) -> Fraction:
    """Character error rate over grapheme clusters, inter-word spaces included."""
    c = char_counts(ref_text, hyp_text, costs)
    if c.n_ref == 0:
        raise UndefinedRateError("CER is undefined for an empty reference")
    return Fraction(c.errors, c.n_ref)


def ser(alignments: Sequence[Alignment]) -> Fraction:
    if not alignments:
        raise UndefinedRateError("SER is undefined for an empty set of utterances")
    errored = sum(1 for a in alignments if any(p.op is not AlignOp.MATCH for p in a.pairs))
    return Fraction(errored, len(alignments))


def ser_from_counts(c: ErrorCounts) -> Fraction:
    if c.n_utts == 0:
        raise UndefinedRateError("SER is undefined for an empty set of utterances")
    return Fraction(c.n_err_utts, c.n_utts)


def percent(rate: Fraction) -> float:
    return float(rate * 100)


def format_percent(rate: Optional[Fraction]) -> str:
    return "n/a" if rate is None else f"{float(rate * 100):.1f}%"
