"""Shared domain types, tokenization and text normalization."""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Union

from .width import split_graphemes, token_width

Number = Union[int, Fraction]


class PosalignError(Exception):
    """Base class for errors raised by this package."""


class AlignmentError(PosalignError):
    pass


@dataclass(frozen=True)
class Token:
    """A whitespace-free word together with its grapheme clusters and width."""

    text: str
    graphemes: tuple[str, ...] = field(default=(), compare=False, repr=False)
    width: int = field(default=0, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("Token text must be non-empty")
        if any(ch.isspace() for ch in self.text):
            raise ValueError(f"Token text contains whitespace: {self.text!r}")
        if not self.graphemes:
            object.__setattr__(self, "graphemes", split_graphemes(self.text))
        elif "".join(self.graphemes) != self.text:
            raise ValueError("graphemes do not concatenate to text")
        object.__setattr__(self, "width", token_width(self))

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Utterance:
    id: str
    tokens: tuple[Token, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("utterance id must be non-empty")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def from_text(cls, utt_id: str, text: str) -> "Utterance":
        return cls(utt_id, tuple(tokenize(text)))

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)


class AlignOp(str, enum.Enum):
    MATCH = "="
    SUB = "S"
    DEL = "D"
    INS = "I"

    def __str__(self) -> str:
        return self.value


def symbol_text(item: Any) -> str:
    """Text of an aligned element: a Token's text, or the item itself."""
    return item.text if isinstance(item, Token) else item


@dataclass(frozen=True)
class AlignedPair:
    """One alignment column. A gap is represented by ``None``."""

    ref: Optional[Any]
    hyp: Optional[Any]
    op: AlignOp

    def __post_init__(self) -> None:
        op = AlignOp(self.op)
        object.__setattr__(self, "op", op)
        ref, hyp = self.ref, self.hyp
        if op is AlignOp.DEL:
            ok = ref is not None and hyp is None
        elif op is AlignOp.INS:
            ok = ref is None and hyp is not None
        elif ref is None or hyp is None:
            ok = False
        else:
            same = symbol_text(ref) == symbol_text(hyp)
            ok = same if op is AlignOp.MATCH else not same
        if not ok:
            raise ValueError(f"inconsistent aligned pair: ({ref!r}, {hyp!r}, {op.value})")

    def as_tuple(self) -> tuple[Optional[str], Optional[str], str]:
        ref = None if self.ref is None else symbol_text(self.ref)
        hyp = None if self.hyp is None else symbol_text(self.hyp)
        return ref, hyp, self.op.value


@dataclass(frozen=True)
class Alignment:
    utterance_id: str
    pairs: tuple[AlignedPair, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def ops(self) -> tuple[AlignOp, ...]:
        return tuple(p.op for p in self.pairs)

    @property
    def ref_items(self) -> list:
        return [p.ref for p in self.pairs if p.ref is not None]

    @property
    def hyp_items(self) -> list:
        return [p.hyp for p in self.pairs if p.hyp is not None]

    def op_string(self) -> str:
        return "".join(p.op.value for p in self.pairs)

    def as_tuples(self) -> list[tuple[Optional[str], Optional[str], str]]:
        return [p.as_tuple() for p in self.pairs]


def _exact(value: Any) -> Number:
    if isinstance(value, bool):
        raise TypeError("cost must be a number")
    if isinstance(value, int):
        return value
    frac = Fraction(value) if isinstance(value, Fraction) else Fraction(str(value))
    return frac.numerator if frac.denominator == 1 else frac


@dataclass(frozen=True)
class CostConfig:
    """Edit costs. A match always costs 0.

    Costs are kept exact (``int`` or ``Fraction``) so that ties in the DP
    are compared without floating-point noise.
    """

    substitution: Number = 1
    insertion: Number = 1
    deletion: Number = 1

    def __post_init__(self) -> None:
        for name in ("substitution", "insertion", "deletion"):
            value = _exact(getattr(self, name))
            if value <= 0:
                raise ValueError(f"{name} cost must be positive, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, spec: str) -> "CostConfig":
        """Parse ``"S,I,D"``, e.g. ``"4,3,3"`` or ``"1/2,1,1"``."""
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) != 3 or not all(parts):
            raise ValueError(f"expected three comma-separated costs S,I,D, got {spec!r}")
        sub, ins, dele = (Fraction(p) for p in parts)
        return cls(sub, ins, dele)

    def sub_cost(self, ref: Any, hyp: Any) -> Number:
        return 0 if symbol_text(ref) == symbol_text(hyp) else self.substitution

    def op_cost(self, op: AlignOp) -> Number:
        return {
            AlignOp.MATCH: 0,
            AlignOp.SUB: self.substitution,
            AlignOp.INS: self.insertion,
            AlignOp.DEL: self.deletion,
        }[AlignOp(op)]

    def as_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("substitution", "insertion", "deletion")}


def tokenize(text: str) -> list[Token]:
    return [Token(chunk) for chunk in text.split()]


def tokens_of(items: Iterable[Union[str, Token]]) -> list[Token]:
    return [t if isinstance(t, Token) else Token(t) for t in items]


def normalize(text: str, strip_punct: bool = False, lowercase: bool = False) -> str:
    """NFC-normalize ``text``, optionally dropping punctuation and folding case.

    With ``strip_punct`` every code point of general category ``P*`` is
    removed and whitespace is collapsed to single spaces.
    """
    text = unicodedata.normalize("NFC", text)
    if lowercase:
        text = unicodedata.normalize("NFC", text.lower())
    if strip_punct:
        text = "".join(ch for ch in text if not unicodedata.category(ch).startswith("P"))
        text = " ".join(text.split())
    return text
