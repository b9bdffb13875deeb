"""Display-width computation for graphemes, tokens and alignment columns.

Widths follow the terminal-cell convention: non-spacing and enclosing marks
and format controls take no column, East Asian wide/fullwidth characters take
two, everything else (spacing combining marks included) takes one.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import TYPE_CHECKING

import regex

if TYPE_CHECKING:
    from .core import AlignedPair, Token

UNICODE_VERSION = unicodedata.unidata_version
SEGMENTER = f"regex {regex.__version__}"

_ZERO_WIDTH_CATEGORIES = frozenset({"Mn", "Me", "Cf"})
_GRAPHEME = regex.compile(r"\X")


def split_graphemes(text: str) -> tuple[str, ...]:
    """Split ``text`` into extended grapheme clusters."""
    return tuple(_GRAPHEME.findall(text))


def codepoint_width(ch: str) -> int:
    if ch.isascii():
        return 1
    if unicodedata.category(ch) in _ZERO_WIDTH_CATEGORIES:
        return 0
    if unicodedata.east_asian_width(ch) in ("W", "F"):
        return 2
    return 1


def grapheme_width(g: str) -> int:
    """Rendered width of one grapheme cluster.

    Multi-code-point clusters are summed code point by code point, so a
    Tamil consonant followed by a spacing vowel sign counts 2 while a
    consonant with a virama counts 1.

    Raises:
        ValueError: if ``g`` is empty.
    """
    if not g:
        raise ValueError("grapheme_width() requires a non-empty cluster")
    return sum(codepoint_width(ch) for ch in g)


def string_width(text: str) -> int:
    return sum(codepoint_width(ch) for ch in text)


def token_width(token: Token) -> int:
    return sum(grapheme_width(g) for g in token.graphemes)


@dataclass(frozen=True)
class ColumnSpec:
    """One rendered column: content width plus the spacing that follows it."""

    width: int
    delta: int = 1

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"column width must be positive, got {self.width}")
        if self.delta < 0:
            raise ValueError(f"delta must be non-negative, got {self.delta}")


def column_width(pair: AlignedPair, delta: int = 1) -> ColumnSpec:
    """Width of the column holding ``pair``: the widest of its three cells."""
    from .renderer import cells

    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    w = max(string_width(cell) for cell in cells(pair))
    return ColumnSpec(width=max(w, 1), delta=delta)
