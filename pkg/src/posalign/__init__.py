"""Word alignment, error rates and part-of-speech error attribution for ASR output."""

__version__ = "0.1.0"

from .aligner import align, alignment_cost, backtrack, build_matrix, merge_indel, validate_eval_tags
from .core import (
    AlignedPair,
    Alignment,
    AlignmentError,
    AlignOp,
    CostConfig,
    PosalignError,
    Token,
    Utterance,
    normalize,
    tokenize,
)
from .metrics import ErrorCounts, cer, count_errors, ser, wer
from .pos import PosReport, WeightTable, aggregate, attribute_pos, export_weights
from .renderer import RenderedAlignment, render
from .width import ColumnSpec, column_width, split_graphemes, string_width

__all__ = [
    "AlignOp",
    "AlignedPair",
    "Alignment",
    "AlignmentError",
    "ColumnSpec",
    "CostConfig",
    "ErrorCounts",
    "PosReport",
    "PosalignError",
    "RenderedAlignment",
    "Token",
    "Utterance",
    "WeightTable",
    "aggregate",
    "align",
    "alignment_cost",
    "attribute_pos",
    "backtrack",
    "build_matrix",
    "cer",
    "column_width",
    "count_errors",
    "export_weights",
    "merge_indel",
    "normalize",
    "render",
    "ser",
    "split_graphemes",
    "string_width",
    "tokenize",
    "validate_eval_tags",
    "wer",
]
