import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from posalign.core import AlignedPair, AlignOp, Token
from posalign.width import ColumnSpec, column_width, grapheme_width, split_graphemes, string_width, token_width


@pytest.mark.parametrize(
    "ch, category",
    [("்", "Mn"), ("ி", "Mc"), ("́", "Mn"), ("‍", "Cf"), ("،", "Po")],
)
def test_unicode_categories_assumed(ch, category):
    assert unicodedata.category(ch) == category


def test_fullwidth_is_f():
    assert unicodedata.east_asian_width("Ａ") == "F"


@pytest.mark.parametrize(
    "g, width",
    [
        ("a", 1),
        ("்", 0),
        ("Ａ", 2),
        ("中", 2),
        ("க்", 1),
        ("கி", 2),
        ("é", 1),
        ("‍", 0),
        ("ب", 1),
    ],
)
def test_grapheme_width(g, width):
    assert grapheme_width(g) == width


def test_grapheme_width_rejects_empty():
    with pytest.raises(ValueError):
        grapheme_width("")


@pytest.mark.parametrize(
    "text, n",
    [("he", 2), ("don't", 5), ("கி", 1), ("அதனால,", 5), ("हमलोग", 4), ("é", 1)],
)
def test_grapheme_counts(text, n):
    assert len(split_graphemes(text)) == n


@pytest.mark.parametrize("text, width", [("he", 2), ("கி", 2), ("ＡＢ", 4), ("мире", 4)])
def test_token_width(text, width):
    assert token_width(Token(text)) == width
    assert string_width(text) == width


@pytest.mark.parametrize(
    "pair, width",
    [
        (AlignedPair("home", "home", AlignOp.MATCH), 4),
        (AlignedPair(None, "to", AlignOp.INS), 2),
        (AlignedPair("is", None, AlignOp.DEL), 2),
        (AlignedPair(None, "x", AlignOp.INS), 1),
        (AlignedPair("a", "bcd", AlignOp.SUB), 3),
    ],
)
def test_column_width(pair, width):
    assert column_width(pair) == ColumnSpec(width, 1)


def test_column_width_never_zero():
    # a lone combining mark has width 0 but still needs a column
    assert column_width(AlignedPair("́", "́", AlignOp.MATCH)).width == 1


@pytest.mark.parametrize("width, delta", [(0, 1), (1, -1)])
def test_column_spec_validation(width, delta):
    with pytest.raises(ValueError):
        ColumnSpec(width, delta)


@given(st.text(min_size=1))
def test_cluster_width_bounded(text):
    for g in split_graphemes(text):
        assert 0 <= grapheme_width(g) <= 2 * len(g)


@given(st.text(alphabet=st.characters(blacklist_categories=("Mn", "Me", "Cf", "Zs", "Zl", "Zp", "Cc", "Cs")), min_size=1))
def test_tokens_with_a_base_character_are_visible(text):
    if any(ch.isspace() for ch in text):
        return
    assert token_width(Token(text)) >= 1


@given(st.text(alphabet="abc中́", min_size=1, max_size=5), st.text(alphabet="abc中", min_size=1, max_size=3))
def test_column_width_monotone(word, extra):
    if not split_graphemes(word)[0].strip("́"):
        return
    narrow = column_width(AlignedPair(word, None, AlignOp.DEL)).width
    wide = column_width(AlignedPair(word + extra, None, AlignOp.DEL)).width
    assert wide >= narrow
