import random

import pytest

import oracles as O
from topofree import words as W
from topofree.automaton import CosetAutomaton, same_subgroup, stallings_fold


def test_fold_square():
    A = stallings_fold([W.parse_word("c c")])
    assert A.size == 2 and A.is_complete() and A.index == 2
    assert A.edges() == [(0, "c", 1), (1, "c", 0)]


def test_fold_classical_index_two():
    A = stallings_fold([W.parse_word(g) for g in ("a", "b a b^-1", "b b")])
    assert A.size == 2 and A.index == 2
    assert A.contains(W.parse_word("b a^5 b^-1")) and not A.contains(W.parse_word("b"))


def test_fold_empty_is_trivial():
    A = stallings_fold([], ["a"])
    assert A.size == 1 and A.trans == {} and A.index is None
    assert A.contains(()) and not A.contains(W.parse_word("a"))


def test_fold_keeps_the_stem_at_the_base_state():
    A = stallings_fold([W.parse_word("a b a^-1")])
    assert A.size == 2 and A.edges() == [(0, "a", 1), (1, "b", 1)]
    assert A.contains(W.parse_word("a b^3 a^-1")) and not A.contains(W.parse_word("b"))


def test_nondeterministic_edges_rejected():
    with pytest.raises(ValueError):
        CosetAutomaton(["a"], 2, [(0, "a", 1), (0, "a", 0)])
    with pytest.raises(ValueError):
        CosetAutomaton(["a"], 1, [(0, "b", 0)])


def test_acceptor_protocol_tracks_off_graph_tail():
    A = stallings_fold([W.parse_word("a a")], ["a", "b"])
    c = A.start()
    for letter in W.parse_word("a b b^-1 a"):
        c = A.step(c, letter)
    assert A.accepts(c)
    c = A.step(A.start(), ("b", 1))
    assert c == (0, (("b", 1),)) and not A.accepts(c)


def test_random_tables_round_trip():
    rng = random.Random(21)
    for _ in range(150):
        letters = ["a", "b", "c"][: rng.randint(1, 3)]
        n = rng.randint(1, 6)
        table = O.random_transitive_table(rng, letters, n)
        A = CosetAutomaton.from_table(letters, table)
        folded = stallings_fold(A.schreier_generators(), letters)
        assert folded == A.canonical() and same_subgroup(folded, A)
        assert len(A.schreier_generators()) == n * (len(letters) - 1) + 1
        for _ in range(20):
            w = O.random_word(rng, letters, rng.randint(0, 10))
            assert folded.contains(w) == (O.act(table, W.reduce_word(w)) == 0)
            assert folded.read(W.reduce_word(w)) == A.canonical().read(W.reduce_word(w))


def test_folded_graph_accepts_generated_products():
    rng = random.Random(5)
    for _ in range(100):
        gens = [O.random_word(rng, "ab", rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
        A = stallings_fold(gens, "ab")
        for _ in range(10):
            picks = [rng.choice(gens) for _ in range(rng.randint(0, 4))]
            product = W.multiply(*(g if rng.random() < 0.5 else W.invert(g) for g in picks))
            assert A.contains(product)
        # canonical numbering does not depend on generator order
        assert A == stallings_fold(list(reversed(gens)), "ab")


def test_transversal_is_breadth_first_least():
    A = stallings_fold([W.parse_word("a a"), W.parse_word("b")], ["a", "b"])
    assert A.transversal() == {0: (), 1: (("a", 1),)}
