"""Three-row REF/HYP/EVAL rendering with width-aware column padding."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Any

from .core import AlignedPair, Alignment, AlignOp, symbol_text
from .width import ColumnSpec, column_width, split_graphemes, string_width

PLACEHOLDER_CHAR = "*"

# Padding is applied in logical order. Bidi reordering of right-to-left
# scripts is left to the terminal.
BIDI_NOTE = (
    "right-to-left text is laid out in logical order; visual reordering is "
    "left to the displaying terminal"
)


@dataclass(frozen=True)
class RenderedAlignment:
    ref_line: str
    hyp_line: str
    eval_line: str
    columns: tuple[ColumnSpec, ...]
    cells: tuple[tuple[str, str, str], ...]

    @property
    def lines(self) -> tuple[str, str, str]:
        return self.ref_line, self.hyp_line, self.eval_line

    def offsets(self) -> list[int]:
        """Display offset at which each column starts."""
        out, pos = [], 0
        for col in self.columns:
            out.append(pos)
            pos += col.width + col.delta
        return out

    def to_dict(self) -> dict:
        return {
            "ref": self.ref_line,
            "hyp": self.hyp_line,
            "eval": self.eval_line,
            "columns": [
                {"ref": r, "hyp": h, "eval": e, "width": c.width}
                for (r, h, e), c in zip(self.cells, self.columns)
            ],
        }


def placeholder(counterpart: Any) -> str:
    """Stand-in for a gap: one ``*`` per grapheme cluster of the word opposite."""
    text = symbol_text(counterpart)
    graphemes = getattr(counterpart, "graphemes", None) or split_graphemes(text)
    return PLACEHOLDER_CHAR * len(graphemes)


def cells(pair: AlignedPair) -> tuple[str, str, str]:
    ref = placeholder(pair.hyp) if pair.ref is None else symbol_text(pair.ref)
    hyp = placeholder(pair.ref) if pair.hyp is None else symbol_text(pair.hyp)
    tag = "" if pair.op is AlignOp.MATCH else pair.op.value
    return ref, hyp, tag


def pad(text: str, width: int) -> str:
    return text + " " * (width - string_width(text))


def render(a: Alignment, delta: int = 1) -> RenderedAlignment:
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    columns = tuple(column_width(p, delta) for p in a.pairs)
    all_cells = tuple(cells(p) for p in a.pairs)
    sep = " " * delta
    lines = []
    for row in range(3):
        lines.append(sep.join(pad(c[row], col.width) for c, col in zip(all_cells, columns)))
    return RenderedAlignment(lines[0], lines[1], lines[2], columns, all_cells)


def has_rtl(a: Alignment) -> bool:
    for item in a.ref_items + a.hyp_items:
        if any(unicodedata.bidirectional(ch) in ("R", "AL") for ch in symbol_text(item)):
            return True
    return False
