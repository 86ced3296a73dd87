import pytest
from hypothesis import given, settings

import oracles as O
from strategies import word_over
from topofree import words as W


def w(text):
    return W.parse_word(text)


def test_reduce_examples():
    assert W.reduce_word(w("e e^-1")) == ()
    assert W.reduce_word(w("a b a")) == w("a b a")
    # frozen from the all-deletion-orders oracle
    assert W.reduce_word(w("a b b^-1 a^-1 a c")) == w("a c")


def test_parse_and_format():
    assert w("x y^-1 x") == (("x", 1), ("y", -1), ("x", 1))
    assert w("x^3 y^-2") == (("x", 1),) * 3 + (("y", -1),) * 2
    assert w("1") == () and W.format_word(()) == "1"
    assert W.format_word(w("x y^-1")) == "x y^-1"
    assert W.parse_word_list("x; y x^-1 ;") == [w("x"), w("y x^-1")]
    with pytest.raises(ValueError):
        w("x^a")
    with pytest.raises(ValueError):
        W.parse_word("x z", alphabet="xy")


def test_substitute_and_rename():
    images = {"a": w("x y"), "b": w("y^-1")}
    assert W.substitute(w("a b"), images) == w("x")
    assert W.substitute(w("a^-1"), images) == w("y^-1 x^-1")
    assert W.rename(w("a b a^-1"), {"a": "c", "b": None}) == ()


def test_nielsen_violations():
    assert W.nielsen_violations([w("a"), w("b")]) == []
    assert W.nielsen_violations([w("a a"), w("a b"), w("b a^-1")]) == []
    bad = W.nielsen_violations([w("a b"), w("a")])
    assert any(p.startswith("N1") for p in bad)
    assert W.nielsen_violations([()])[0].startswith("N0")


def test_confluence_small_alphabet_exhaustive():
    memo = {}
    letters = [("a", 1), ("a", -1), ("b", 1), ("b", -1), ("c", 1), ("c", -1), ("d", 1), ("d", -1)]
    for n in range(6):
        for word in O.all_words(letters, n):
            forms = O.all_normal_forms(word, memo)
            assert forms == {W.reduce_word(word)}


@settings(max_examples=500, deadline=None)
@given(word_over("abc", 16))
def test_reduce_idempotent_and_reduced(word):
    r = W.reduce_word(word)
    assert W.is_reduced(r) and W.reduce_word(r) == r


@settings(max_examples=500, deadline=None)
@given(word_over("abc"), word_over("abc"))
def test_inverse_laws(u, v):
    assert W.multiply(u, W.invert(u)) == ()
    assert W.invert(W.invert(u)) == u
    assert W.invert(W.multiply(u, v)) == W.multiply(W.invert(v), W.invert(u))


@settings(max_examples=300, deadline=None)
@given(word_over("abc"))
def test_format_parse_round_trip(word):
    assert W.parse_word(W.format_word(word)) == word
