"""Word-level Needleman-Wunsch alignment of a hypothesis against a reference.

The aligner fills the usual prefix cost matrix, recovers a minimum-cost
alignment with a fixed tie-break priority, and can merge adjacent
deletion/insertion pairs into substitutions.

Sequences may hold :class:`~posalign.core.Token` objects or plain strings
(grapheme clusters, for character-level scoring); elements are compared by
their text.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

from .core import (
    AlignedPair,
    Alignment,
    AlignmentError,
    AlignOp,
    CostConfig,
    Number,
    symbol_text,
)

logger = logging.getLogger(__name__)

UNIT_COSTS = CostConfig()


@dataclass(frozen=True)
class DpMatrix:
    """Prefix cost matrix: ``cells[i][j]`` is the cost of aligning ``ref[:i]`` with ``hyp[:j]``."""

    cells: tuple[tuple[Number, ...], ...]

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    def __getitem__(self, index: tuple[int, int]) -> Number:
        i, j = index
        return self.cells[i][j]

    @property
    def distance(self) -> Number:
        return self.cells[-1][-1]

    def tolist(self) -> list[list[Number]]:
        return [list(row) for row in self.cells]


def build_matrix(ref: Sequence[Any], hyp: Sequence[Any], costs: CostConfig = UNIT_COSTS) -> DpMatrix:
    n, m = len(ref), len(hyp)
    c_ins, c_del = costs.insertion, costs.deletion
    ref_text = [symbol_text(r) for r in ref]
    hyp_text = [symbol_text(h) for h in hyp]

    prev = [j * c_ins for j in range(m + 1)]
    rows = [tuple(prev)]
    for i in range(1, n + 1):
        cur = [i * c_del]
        r = ref_text[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (0 if r == hyp_text[j - 1] else costs.substitution)
            up = prev[j] + c_del
            left = cur[j - 1] + c_ins
            cur.append(min(diag, up, left))
        rows.append(tuple(cur))
        prev = cur
    return DpMatrix(tuple(rows))


def _check_matrix(m: DpMatrix, ref_text: list[str], hyp_text: list[str], costs: CostConfig) -> None:
    expected = build_matrix(ref_text, hyp_text, costs)
    if m.rows != expected.rows or m.cols != expected.cols:
        raise AlignmentError(
            f"matrix shape {m.rows}x{m.cols} does not match sequences "
            f"({len(ref_text)}+1)x({len(hyp_text)}+1)"
        )
    for i, (got_row, exp_row) in enumerate(zip(m.cells, expected.cells)):
        for j, (got, exp) in enumerate(zip(got_row, exp_row)):
            if got != exp:
                raise AlignmentError(f"matrix cell D({i},{j})={got} is inconsistent (expected {exp})")


def backtrack(
    m: DpMatrix,
    ref: Sequence[Any],
    hyp: Sequence[Any],
    costs: CostConfig = UNIT_COSTS,
    utterance_id: str = "",
) -> Alignment:
    """Recover a minimum-cost alignment from a filled matrix.

    First every transition that reproduces its cell's value is traced back
    from ``(N, M)``; this marks the cells lying on some optimal path. The
    alignment is then read off that optimal subgraph from ``(0, 0)`` in
    sequence order, and wherever several optimal transitions leave a cell
    the one taken is, in priority order: match, insertion, deletion,
    substitution.

    Raises:
        AlignmentError: if ``m`` was not built from ``ref``, ``hyp`` and ``costs``.
    """
    ref_text = [symbol_text(r) for r in ref]
    hyp_text = [symbol_text(h) for h in hyp]
    _check_matrix(m, ref_text, hyp_text, costs)
    n, mm = len(ref), len(hyp)
    D = m.cells
    c_sub, c_ins, c_del = costs.substitution, costs.insertion, costs.deletion

    on_path = [[False] * (mm + 1) for _ in range(n + 1)]
    on_path[n][mm] = True
    for i in range(n, -1, -1):
        for j in range(mm, -1, -1):
            if not on_path[i][j]:
                continue
            if i and j:
                step = 0 if ref_text[i - 1] == hyp_text[j - 1] else c_sub
                if D[i][j] == D[i - 1][j - 1] + step:
                    on_path[i - 1][j - 1] = True
            if i and D[i][j] == D[i - 1][j] + c_del:
                on_path[i - 1][j] = True
            if j and D[i][j] == D[i][j - 1] + c_ins:
                on_path[i][j - 1] = True

    pairs: list[AlignedPair] = []
    i = j = 0
    while (i, j) != (n, mm):
        here = D[i][j]
        can_diag = i < n and j < mm and on_path[i + 1][j + 1]
        equal = can_diag and ref_text[i] == hyp_text[j]
        if equal and D[i + 1][j + 1] == here:
            pairs.append(AlignedPair(ref[i], hyp[j], AlignOp.MATCH))
            i, j = i + 1, j + 1
        elif j < mm and on_path[i][j + 1] and D[i][j + 1] == here + c_ins:
            pairs.append(AlignedPair(None, hyp[j], AlignOp.INS))
            j += 1
        elif i < n and on_path[i + 1][j] and D[i + 1][j] == here + c_del:
            pairs.append(AlignedPair(ref[i], None, AlignOp.DEL))
            i += 1
        elif can_diag and not equal and D[i + 1][j + 1] == here + c_sub:
            pairs.append(AlignedPair(ref[i], hyp[j], AlignOp.SUB))
            i, j = i + 1, j + 1
        else:  # pragma: no cover - unreachable for a consistent matrix
            raise AlignmentError(f"no optimal transition leaves cell ({i},{j})")
    return Alignment(utterance_id, tuple(pairs))


def merge_indel(a: Alignment) -> Alignment:
    """Merge each adjacent (D, I) or (I, D) pair into one substitution.

    Pairs are scanned left to right without overlap; the merged pair keeps
    the deleted reference word and the inserted hypothesis word. Scanning
    repeats until nothing changes.
    """
    pairs = list(a.pairs)
    while True:
        out: list[AlignedPair] = []
        k = 0
        merged = False
        while k < len(pairs):
            cur = pairs[k]
            nxt = pairs[k + 1] if k + 1 < len(pairs) else None
            if nxt is not None and {cur.op, nxt.op} == {AlignOp.DEL, AlignOp.INS}:
                deleted, inserted = (cur, nxt) if cur.op is AlignOp.DEL else (nxt, cur)
                # identical words can only meet here in hand-built alignments
                op = AlignOp.MATCH if symbol_text(deleted.ref) == symbol_text(inserted.hyp) else AlignOp.SUB
                out.append(AlignedPair(deleted.ref, inserted.hyp, op))
                k += 2
                merged = True
            else:
                out.append(cur)
                k += 1
        pairs = out
        if not merged:
            return Alignment(a.utterance_id, tuple(pairs))


def align(
    ref: Sequence[Any],
    hyp: Sequence[Any],
    costs: Optional[CostConfig] = None,
    merge: bool = True,
    utterance_id: str = "",
) -> Alignment:
    costs = costs or UNIT_COSTS
    m = build_matrix(ref, hyp, costs)
    a = backtrack(m, ref, hyp, costs, utterance_id)
    return merge_indel(a) if merge else a


def alignment_cost(a: Alignment, costs: CostConfig = UNIT_COSTS) -> Number:
    return sum((costs.op_cost(p.op) for p in a.pairs), 0)


def validate_eval_tags(a: Alignment, eval_tags: Iterable[str]) -> bool:
    """Check the alignment's S/D/I multiset against externally supplied EVAL tags.

    A mismatch is logged as a warning and reported by returning ``False``;
    the alignment itself is never altered.
    """
    expected = Counter(t for t in eval_tags if t in ("S", "D", "I"))
    got = Counter(p.op.value for p in a.pairs if p.op is not AlignOp.MATCH)
    if expected == got:
        return True
    logger.warning(
        "utterance %r: alignment ops %s differ from EVAL tags %s",
        a.utterance_id,
        dict(sorted(got.items())),
        dict(sorted(expected.items())),
    )
    return False
