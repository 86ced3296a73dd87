import random

import pytest
from hypothesis import given, settings

import oracles as O
from strategies import pointed_spaces
from topofree import words as W
from topofree.finspace import FinSpace, PointedFinSpace, is_connected, path_components
from topofree.graev import (
    classify,
    graev_to_markov,
    is_markov_free,
    markov_as_graev,
    markov_to_graev,
    markov_witness,
)

SIERPINSKI = FinSpace(["0", "1"], [("1", "0")])
FLAG = PointedFinSpace(FinSpace(["*", "u", "v"], [("u", "v")]), "*")


def test_classify_examples():
    assert classify(PointedFinSpace(SIERPINSKI, "0")).connected
    c = classify(PointedFinSpace(FinSpace.discrete(["*", "x"]), "*"))
    assert not c.connected
    w = c.witness
    assert w.first == {"*"} and w.second == {"x"} and w.e2 == "x"
    assert len(w.wedge.space) == 1


def test_classify_sierpinski_summand():
    w = classify(FLAG).witness
    assert w.first == {"*"} and w.second == {"u", "v"} and w.e2 == "u"
    # frozen from the wedge oracle: {z, v} with z <= v
    assert w.wedge.space == FinSpace(["[*,u]", "v"], [("[*,u]", "v")])
    assert w.z == "[*,u]"


def test_rewriter_examples():
    X = PointedFinSpace(FinSpace.discrete(["*", "a", "b", "c"]), "*")
    w = markov_witness(X, {"*", "a"}, e2="b")
    z = w.z
    assert graev_to_markov(w, W.parse_word("b")) == ((z, 1),)
    assert graev_to_markov(w, W.parse_word("a")) == (("a", 1), (z, -1))
    assert graev_to_markov(w, W.parse_word("a c^-1")) == (("a", 1), (z, -1), ("c", -1))
    assert markov_to_graev(w, ((z, 1),)) == (("b", 1),)
    assert markov_to_graev(w, (("a", 1),)) == (("a", 1), ("b", 1))
    word = W.parse_word("a c a^-1")
    assert markov_to_graev(w, graev_to_markov(w, word)) == word


def test_witness_validation():
    X = PointedFinSpace(FinSpace(["*", "a"], [("a", "*")]), "*")
    with pytest.raises(ValueError):
        markov_witness(X, {"*"})
    with pytest.raises(ValueError):
        markov_witness(FLAG, {"u", "v"})
    with pytest.raises(ValueError):
        graev_to_markov(classify(FLAG).witness, W.parse_word("q"))


def test_markov_as_graev():
    P = markov_as_graev(SIERPINSKI)
    assert not is_connected(P.space) and is_markov_free(P)


@settings(max_examples=300, deadline=None)
@given(pointed_spaces(max_points=6))
def test_classify_agrees_with_connectivity(X):
    c = classify(X)
    assert c.connected == is_connected(X.space)
    le = {(x, y) for y in X.points for x in X.space.down(y)}
    assert c.connected == (len(O.path_classes(X.points, le, 3)) == 1)
    if not c.connected:
        w = c.witness
        assert X.space.is_open(w.first) and X.space.is_open(w.second)
        assert w.e2 == min(w.second)
        assert len(path_components(w.wedge.space)[0]) == len(path_components(X.space)[0]) - 1


def test_rewriters_are_inverse_homomorphisms():
    rng = random.Random(8)
    for _ in range(60):
        pts, le = O.random_preorder(rng, rng.randint(2, 6), density=0.15, names="*abcdef")
        X = PointedFinSpace(FinSpace(pts, le), "*")
        c = classify(X)
        if c.connected:
            continue
        w = c.witness
        g_letters = X.letters()
        m_letters = [p for p in w.wedge.points]
        for _ in range(50):
            u = O.random_word(rng, g_letters, rng.randint(0, 20))
            v = O.random_word(rng, g_letters, rng.randint(0, 20))
            assert markov_to_graev(w, graev_to_markov(w, u)) == W.reduce_word(u)
            assert graev_to_markov(w, u + v) == W.multiply(graev_to_markov(w, u), graev_to_markov(w, v))
            m = O.random_word(rng, m_letters, rng.randint(0, 20))
            assert graev_to_markov(w, markov_to_graev(w, m)) == W.reduce_word(m)
