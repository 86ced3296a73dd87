import random
from dataclasses import replace

import pytest

import oracles as O
from topofree import words as W
from topofree.automaton import CosetAutomaton, stallings_fold
from topofree.finspace import FinSpace, PointedFinSpace, find_homeomorphism, path_components, subspace
from topofree.cover import (
    IndexTooLargeError,
    InfiniteIndexError,
    NotOpenError,
    SubgroupSpec,
    component_letters,
    component_map,
    component_projection,
    covering_violations,
    decide_open,
    schreier_cover,
    subgroup_basis,
    verify_presentation,
)
from topofree.groupoid import stratum_open_check
from topofree.topgraph import Tree, quotient_by_tree

FLAG = PointedFinSpace(FinSpace(["*", "u", "v"], [("u", "v")]), "*")
DISCRETE_X = PointedFinSpace(FinSpace.discrete(["*", "x"]), "*")
DISCRETE_PQ = PointedFinSpace(FinSpace.discrete(["*", "p", "q"]), "*")


def spec(ambient, *gens):
    return SubgroupSpec(ambient, tuple(W.parse_word(g) for g in gens))


def flag_index_two():
    return SubgroupSpec.preimage_of(FLAG, [W.parse_word("[u,v] [u,v]")])


def words_of(pres):
    return {p: W.format_word(w) for p, w in pres.generator_words.items()}


def test_component_projection_examples():
    X = PointedFinSpace(FinSpace(["*", "a", "b"], [("a", "*")]), "*")
    assert component_projection(X, W.parse_word("a a^-1 a")) == ()
    assert component_projection(DISCRETE_PQ, W.parse_word("p q^-1")) == W.parse_word("p q^-1")
    assert component_projection(FLAG, W.parse_word("u v^-1")) == ()
    assert component_letters(FLAG) == ("[u,v]",)


def test_generators_may_not_use_basepoint():
    with pytest.raises(ValueError):
        SubgroupSpec(FLAG, (W.parse_word("*"),))
    with pytest.raises(ValueError):
        SubgroupSpec(FLAG, (W.parse_word("w"),))


def test_decide_open_examples():
    assert decide_open(spec(DISCRETE_PQ, "p q p"))
    d = decide_open(spec(FLAG, "u"))
    assert not d and d.reason == "component relator u v^-1 not in subgroup"
    assert d.witness == W.parse_word("u v^-1")
    assert decide_open(spec(FLAG, "u", "v"))


def test_decide_open_conjugate_witness():
    # contains u v^-1 but not its conjugate by u
    d = decide_open(spec(FLAG, "u v^-1", "u u"))
    assert not d
    assert not stallings_fold([W.parse_word("u v^-1"), W.parse_word("u u")]).contains(d.witness)
    assert component_projection(FLAG, d.witness) == ()


def test_decide_open_infinite_index_witness():
    X = PointedFinSpace(FinSpace(["*", "u", "v", "w"], [("u", "v")]), "*")
    d = decide_open(spec(X, "u v^-1"))
    assert not d and component_projection(X, d.witness) == ()
    assert not stallings_fold([W.parse_word("u v^-1")]).contains(d.witness)


def test_decide_open_matches_strata_on_fixtures():
    cases = [
        spec(FLAG, "u"),
        spec(FLAG, "u", "v"),
        spec(FLAG, "u v^-1", "u u"),
        spec(FLAG, "v u^-1", "u u", "u v"),
        spec(DISCRETE_PQ, "p", "q p q^-1", "q q"),
        spec(PointedFinSpace(FinSpace(["*", "a"], [("a", "*")]), "*"), "a a"),
        spec(PointedFinSpace(FinSpace(["*", "a"], [("a", "*")]), "*"), "a"),
        spec(PointedFinSpace(FinSpace(["*", "a", "b"], [("*", "a")]), "*"), "b a^-1 b"),
    ]
    for H in cases:
        d = decide_open(H)
        assert stratum_open_check(H.ambient, d.automaton, 6) == d.is_open, H


def test_cover_discrete_index_two():
    C = schreier_cover(spec(DISCRETE_X, "x x"))
    assert len(C.total.vertices) == 4 and len(C.total.edges()) == 4
    assert C.index == 2 and covering_violations(C) == []
    assert C.total.endpoints("x@0") == ("a0", "b1")


def test_cover_whole_group_is_base():
    C = schreier_cover(spec(FLAG, "u", "v"))
    assert C.index == 1
    assert C.total.edge_space("a0", "b0") == FinSpace(["*@0", "u@0", "v@0"], [("u@0", "v@0")])


def test_cover_three_points():
    C = schreier_cover(spec(DISCRETE_PQ, "p", "q p q^-1", "q q"))
    lifted = [e for e in C.total.edges() if not e.startswith("*")]
    assert len(C.total.vertices) == 4 and len(lifted) == 4 and len(C.total.edges()) == 6


def test_cover_errors():
    with pytest.raises(NotOpenError):
        schreier_cover(spec(FLAG, "u"))
    with pytest.raises(InfiniteIndexError):
        schreier_cover(spec(DISCRETE_PQ, "p"))
    with pytest.raises(IndexTooLargeError):
        schreier_cover(spec(DISCRETE_X, "x x x"), max_index=2)


def test_basis_discrete_index_two():
    P = subgroup_basis(spec(DISCRETE_X, "x x"))
    assert words_of(P) == {"x@1": "x x"}
    assert P.space.space == FinSpace.discrete(["*", "x@1"])
    assert verify_presentation(spec(DISCRETE_X, "x x"), P).ok


def test_basis_classical_index_two():
    H = spec(DISCRETE_PQ, "p", "q p q^-1", "q q")
    P = subgroup_basis(H)
    assert words_of(P) == {"p@0": "p", "p@1": "q p q^-1", "q@1": "q q"}
    assert verify_presentation(H, P).ok


def test_basis_flagship():
    H = flag_index_two()
    assert [W.format_word(g) for g in H.generators] == ["v u^-1", "u u", "u v"]
    P = subgroup_basis(H)
    assert words_of(P) == {"u@1": "u u", "v@0": "v u^-1", "v@1": "u v"}
    assert P.tree.edge_ids == {"*@0", "*@1", "u@0"}
    blocks = [b for b in path_components(P.space.space)[0] if "*" not in b]
    assert blocks == [frozenset({"u@1", "v@1"})]
    assert find_homeomorphism(subspace(P.space.space, blocks[0]), subspace(FLAG.space, {"u", "v"}))
    # v@0 shares a component with the collapsed tree point u@0
    assert P.space.space.le("*", "v@0")
    report = verify_presentation(H, P)
    assert report.ok, report.lines()
    assert ("rank", True, "1 = 2*(1-1)+1") in report.checks


def test_verify_detects_squared_generator():
    H = spec(DISCRETE_PQ, "p", "q p q^-1", "q q")
    P = subgroup_basis(H)
    words = dict(P.generator_words)
    words["p@0"] = W.parse_word("p p")
    report = verify_presentation(H, replace(P, generator_words=words))
    assert "same-subgroup" in report.failed() and "membership" not in report.failed()


def test_verify_detects_coarsened_component():
    H = flag_index_two()
    P = subgroup_basis(H)
    Q = P.space.space
    coarse = FinSpace(Q.points, Q.relation() + [("v@1", "u@1")])
    report = verify_presentation(H, replace(P, space=PointedFinSpace(coarse, "*")))
    assert "component-homeomorphism" in report.failed()


def test_index_one_degeneracy():
    for ambient, gens in ((FLAG, ["u", "v"]), (DISCRETE_PQ, ["p", "q"])):
        H = spec(ambient, *gens)
        P = subgroup_basis(H)
        C = P.cover
        base_Q = quotient_by_tree(C.base, Tree.from_edges(C.base, [ambient.basepoint]))
        mapping = {p: p.split("@")[0] for p in P.space.points}
        assert find_homeomorphism(P.space.space, base_Q.space) is not None
        assert {mapping[p]: w for p, w in P.generator_words.items()} == {x: ((x, 1),) for x in ambient.letters()}


def test_nontrivial_basepoint_component():
    X = PointedFinSpace(FinSpace(["*", "a", "y"], [("a", "*")]), "*")
    H = SubgroupSpec.preimage_of(X, [W.parse_word("y y y")])
    P = subgroup_basis(H)
    assert verify_presentation(H, P).ok
    assert len([b for b in path_components(P.space.space)[0] if "*" not in b]) == 1


def test_express_round_trip():
    rng = random.Random(2)
    H = flag_index_two()
    P = subgroup_basis(H)
    points = sorted(P.generator_words)
    for _ in range(200):
        q_word = O.random_word(rng, points, rng.randint(0, 8))
        h = P.substitute(q_word)
        assert P.express(h) == W.reduce_word(q_word)
    with pytest.raises(ValueError):
        P.express(W.parse_word("u"))


def test_random_presentations_verify():
    rng = random.Random(17)
    for _ in range(40):
        pts, le = O.random_preorder(rng, rng.randint(2, 4), density=0.25, names="*abc")
        X = PointedFinSpace(FinSpace(pts, le), "*")
        letters = component_letters(X)
        n = rng.randint(1, 4) if letters else 1
        table = O.random_transitive_table(rng, letters, n) if letters else {}
        A = CosetAutomaton.from_table(letters, table) if letters else CosetAutomaton([], 1, [])
        H = SubgroupSpec.preimage(X, A)
        P = subgroup_basis(H)
        report = verify_presentation(H, P)
        assert report.ok, report.lines()
        assert covering_violations(P.cover) == []
        for g in P.generators():
            assert O.act(table, W.rename(g, component_map(X))) == 0
