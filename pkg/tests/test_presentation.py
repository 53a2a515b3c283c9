import logging

import pytest
from hypothesis import given, strategies as st

from vhsquare.presentation import (HORIZONTAL, VERTICAL, Letter, PresentationError, PresentationSyntaxError,
                                   builtin, counterexample, cyclic_reduce, format_word, free_reduce,
                                   is_cyclically_reduced, leary_family, leary_presentation, make_presentation,
                                   parse_presentation, parse_word)


def test_parse_leary_first_relator():
    p = parse_presentation("vertical: a c e\nhorizontal: b d f\nrelator: a b c d e f")
    assert len(p.generators) == 6
    assert len(p.relators) == 1
    assert [str(x) for x in p.relators[0]] == list("abcdef")


def test_parse_torus():
    p = parse_presentation("vertical: v\nhorizontal: h\nrelator: v h v^-1 h^-1")
    assert len(p.relators[0]) == 4
    assert p.orientation == {"v": VERTICAL, "h": HORIZONTAL}


def test_empty_after_reduction():
    with pytest.raises(PresentationError, match="empty"):
        parse_presentation("vertical: a\nhorizontal: b\nrelator: a a^-1")


def test_reduction_warns(caplog):
    with caplog.at_level(logging.WARNING):
        p = parse_presentation("vertical: a\nhorizontal: b\nrelator: b a b^-1 b a b^-1")
    assert format_word(p.relators[0]) == "a^2"
    assert p.diagnostics and "reduced" in caplog.text


def test_comments_and_accumulating_declarations():
    text = "# torus\nvertical: v   # one\nhorizontal: h\n\nrelator: v h v^-1 h^-1\n"
    assert parse_presentation(text).to_text() == "vertical: v\nhorizontal: h\nrelator: v h v^-1 h^-1\n"


@pytest.mark.parametrize("text, line, column", [
    ("vertical: a\nhorizontal: b\nrelator: a c", 3, 12),
    ("vertical: a\nhorizontal: b\nrelator: a^0 b", 3, 10),
    ("vertical: a\nnonsense: b", 2, 1),
    ("vertical: a a", 1, 13),
])
def test_syntax_errors_carry_position(text, line, column):
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_generator_in_both_classes():
    with pytest.raises(PresentationError, match="both"):
        parse_presentation("vertical: a\nhorizontal: a\nrelator: a")


def test_leary_lengths():
    p = leary_presentation()
    assert len(p.generators) == 6
    # hand count: a b c d e f | a b c c f e e d | a a f c c b e d | a d d c b b e f
    #             a f f c d e b b | a d d c f f e b b
    assert [len(r) for r in p.relators] == [6, 8, 8, 8, 8, 9]
    assert all(x.sign == 1 for x in p.relators[0])
    assert [str(x) for x in p.relators[5]] == list("addcffebb")


def test_leary_family_shape():
    p = leary_family(4)
    assert len(p.generators) == 8 and len(p.relators) == 8
    assert all(len(r) == 49 for r in p.relators)
    with pytest.raises(PresentationError):
        leary_family(3)


def test_leary_family_block():
    w = leary_family(5).relators[0]
    assert format_word(w[1:7]) == "a_0 a_2 a_0^-2 a_2^-1 a_0"
    assert format_word(w[7:13]) == "b_0 b_2 b_0^-2 b_2^-1 b_0"


def test_builtins():
    assert format_word(counterexample(3, 2, 5).relators[0]) == "h v^2 h^-1 v^5"
    assert builtin("counterexample1").relators == counterexample(1, 2, 3).relators
    with pytest.raises(PresentationError):
        builtin("nope")


letters = st.builds(Letter, st.sampled_from("abc"), st.sampled_from((1, -1)))


@given(st.lists(letters, max_size=20))
def test_reduction_properties(word):
    word = tuple(word)
    r = cyclic_reduce(word)
    assert free_reduce(r) == r
    assert is_cyclically_reduced(r) or len(r) <= 1
    assert cyclic_reduce(r) == r


@given(st.lists(letters, min_size=1, max_size=20))
def test_format_parse_roundtrip(word):
    word = tuple(word)
    assert parse_word(format_word(word)) == word


def test_round_trip_text():
    p = leary_presentation()
    q = parse_presentation(p.to_text())
    assert q == p
    assert make_presentation(["v"], ["h"], ["v h"]).to_text() == "vertical: v\nhorizontal: h\nrelator: v h\n"
