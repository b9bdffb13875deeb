import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import WORKED_EXAMPLE, MIXED_SCRIPT
from posalign.aligner import align
from posalign.core import AlignedPair, Alignment, AlignOp, tokenize
from posalign.renderer import BIDI_NOTE, has_rtl, placeholder, render
from posalign.width import split_graphemes, string_width


def check_invariants(r):
    widths = {string_width(line) for line in r.lines}
    assert len(widths) == 1
    expected = sum(c.width for c in r.columns) + sum(c.delta for c in r.columns[:-1])
    assert widths == {expected}
    offsets = r.offsets()
    for row, line in enumerate(r.lines):
        for k, start in enumerate(offsets):
            cell = r.cells[k][row]
            # walk the line cluster by cluster to find where this cell begins
            clusters = split_graphemes(line)
            pos, idx = 0, 0
            while pos < start:
                pos += string_width(clusters[idx])
                idx += 1
            assert pos == start
            assert "".join(clusters[idx:]).startswith(cell)


@pytest.mark.parametrize(
    "word, expected",
    [("don't", "*****"), ("to", "**"), ("அதனால,", "*****"), ("हम", "**")],
)
def test_placeholder(word, expected):
    assert placeholder(tokenize(word)[0]) == expected
    assert placeholder(word) == expected


def test_worked_example_layout():
    r = render(align(tokenize(WORKED_EXAMPLE[0]), tokenize(WORKED_EXAMPLE[1])))
    assert r.ref_line == "he is going ** home"
    assert r.hyp_line == "he ** going to home"
    assert r.eval_line.index("D") == 3
    assert r.eval_line.index("I") == 12
    assert r.eval_line.strip() == "D        I"
    assert r.offsets() == [0, 3, 6, 12, 15]


def test_all_match_eval_blank():
    r = render(align(["a", "b"], ["a", "b"]))
    assert r.eval_line.strip() == ""
    assert r.ref_line == r.hyp_line == "a b"


def test_single_insertion():
    r = render(Alignment("u", (AlignedPair(None, "x", AlignOp.INS),)))
    assert r.lines == ("*", "x", "I")


@pytest.mark.parametrize("delta", [0, 1, 3])
def test_delta(delta):
    r = render(align(tokenize(WORKED_EXAMPLE[0]), tokenize(WORKED_EXAMPLE[1])), delta)
    assert all(c.delta == delta for c in r.columns)
    check_invariants(r)


def test_negative_delta_rejected():
    with pytest.raises(ValueError):
        render(align(["a"], ["a"]), -1)


@pytest.mark.parametrize("ref, hyp", MIXED_SCRIPT)
def test_mixed_script_invariants(ref, hyp):
    r = render(align(tokenize(ref), tokenize(hyp)))
    check_invariants(r)


@pytest.mark.parametrize("ref, hyp", MIXED_SCRIPT)
def test_round_trip(ref, hyp):
    r = render(align(tokenize(ref), tokenize(hyp)))
    for line, text in ((r.ref_line, ref), (r.hyp_line, hyp)):
        kept = [w for w in line.split() if set(w) != {"*"}]
        assert kept == text.split()


def test_rtl_detection():
    assert has_rtl(align(["من"], ["ما"]))
    assert not has_rtl(align(["he"], ["he"]))
    assert "logical order" in BIDI_NOTE


def test_json_projection():
    r = render(align(tokenize(WORKED_EXAMPLE[0]), tokenize(WORKED_EXAMPLE[1])))
    d = r.to_dict()
    assert d["columns"][1] == {"ref": "is", "hyp": "**", "eval": "D", "width": 2}
    assert d["ref"] == r.ref_line


WORDS = ["he", "கி", "அதனால,", "हमलोग", "мире", "من", "中文", "é", "ಮನೆಯಲ್ಲಿ", "Ρησίταν"]


@settings(max_examples=500, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=6), st.lists(st.sampled_from(WORDS), max_size=6), st.integers(0, 2))
def test_random_alignments_keep_columns(ref, hyp, delta):
    a = align(tokenize(" ".join(ref)), tokenize(" ".join(hyp)))
    if not a.pairs:
        return
    check_invariants(render(a, delta))
