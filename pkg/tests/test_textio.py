import random

import pytest

import oracles as O
from topofree import words as W
from topofree.finspace import FinSpace
from topofree.textio import GraphDecl, Manifest, ManifestError, emit_manifest, parse_manifest

SIERPINSKI = """topofree 1
space S
point 0
point 1
le 1 0
"""


def error_of(text):
    with pytest.raises(ManifestError) as info:
        parse_manifest(text)
    return info.value


def test_minimal_manifest():
    m = parse_manifest(SIERPINSKI)
    assert list(m.spaces) == ["S"]
    assert m.spaces["S"] == FinSpace(["0", "1"], [("1", "0")])


def test_point_one_reads_as_identity_in_words():
    m = parse_manifest(SIERPINSKI + "pointed P S 0\nsubgroup H P\ngen 1\n")
    assert m.subgroups["H"] == ("P", [()])
    m.subgroups["H"] = ("P", [(("1", 1),)])
    with pytest.raises(ValueError):
        emit_manifest(m)


def test_comments_and_closure():
    m = parse_manifest("topofree 1\n# c\nspace S  # trailing\npoint a\npoint b\npoint c\nle a b\nle b c\n")
    assert m.spaces["S"].le("a", "c")


def test_dangling_graph_reference():
    e = error_of("topofree 1\ngraph G\nvertex a\nvertex b\nedges a b Missing\n")
    assert "dangling reference" in e.message and (e.line, e.column) == (5, 11)


def test_duplicate_name():
    e = error_of(SIERPINSKI + "pointed S S 0\n")
    assert "duplicate name" in e.message and e.line == 6


def test_syntax_errors_carry_positions():
    assert error_of("space S\n").line == 1
    assert error_of("topofree 2\n").column == 10
    e = error_of("topofree 1\nspace S\npoint a\nle a b\n")
    assert (e.line, e.column) == (4, 6)
    e = error_of("topofree 1\npoint a\n")
    assert "outside" in e.message
    e = error_of("topofree 1\nspace S\n  bogus a\n")
    assert (e.line, e.column) == (3, 3)


def test_subgroup_letters_checked():
    e = error_of(SIERPINSKI + "pointed P S 0\nsubgroup H P\ngen 0\n")
    assert "not a non-basepoint point" in e.message and (e.line, e.column) == (7, 10)
    m = parse_manifest(SIERPINSKI.replace("point 1", "point x").replace("le 1 0", "le x 0") + "pointed P S 0\nsubgroup H P\ngen x^2 x^-1\n")
    assert m.subgroups["H"] == ("P", [(("x", 1),)])


def test_bad_basepoint():
    assert "basepoint" in error_of(SIERPINSKI + "pointed P S q\n").message


def test_graph_edge_ids_must_be_unique():
    text = SIERPINSKI + "graph G\nvertex a\nvertex b\nedges a b S\nedges b a S\n"
    assert "used twice" in error_of(text).message


def random_manifest(rng):
    m = Manifest()
    for i in range(rng.randint(1, 3)):
        pts, le = O.random_preorder(rng, rng.randint(1, 4), names=[f"s{i}p{j}" for j in range(4)])
        m.spaces[f"S{i}"] = FinSpace(pts, le)
    names = sorted(m.spaces)
    if rng.random() < 0.7:
        s = rng.choice(names)
        m.pointed["P"] = (s, rng.choice(m.spaces[s].points))
        letters = [p for p in m.spaces[s].points if p != m.pointed["P"][1]]
        if letters:
            gens = [W.reduce_word(O.random_word(rng, letters, rng.randint(0, 4))) for _ in range(rng.randint(0, 3))]
            m.subgroups["H"] = ("P", gens)
    if len(names) >= 2 and rng.random() < 0.5:
        m.graphs["G"] = GraphDecl(["x", "y"], [("x", "y", names[0]), ("y", "y", names[1])])
    return m


def test_round_trip_fuzz():
    rng = random.Random(50)
    for _ in range(50):
        m = random_manifest(rng)
        text = emit_manifest(m)
        once = emit_manifest(parse_manifest(text))
        assert once == text
        assert emit_manifest(parse_manifest(once)) == once
