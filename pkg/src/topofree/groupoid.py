"""Word calculus of the free groupoid on a Top-graph.

Morphisms are words of signed edges; ``(e, +1)`` runs from the source of
``e`` to its target and ``(e, -1)`` runs back.  Vertex groups are extracted
with a maximal tree, following the usual retraction onto a vertex.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache

from .finspace import PointedFinSpace
from .topgraph import TopGraph, Tree, is_connected_graph, validate_tree, quotient_by_tree, DisconnectedGraphError
from . import words as W


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class GroupoidWord:
    source: str
    target: str
    letters: W.Word = ()

    def __post_init__(self):
        if not self.letters and self.source != self.target:
            raise CompositionError("the empty word is an identity and needs source == target")

    @property
    def is_reduced(self) -> bool:
        return W.is_reduced(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return f"{self.source}->{self.target}: {W.format_word(self.letters)}"


def identity(x: str) -> GroupoidWord:
    return GroupoidWord(x, x, ())


def letter_ends(graph: TopGraph, letter: W.Letter) -> tuple[str, str]:
    x, y = graph.endpoints(letter[0])
    return (x, y) if letter[1] > 0 else (y, x)


def make_word(graph: TopGraph, source: str, letters: Iterable[W.Letter]) -> GroupoidWord:
    """Build a word starting at ``source``; raises if letters do not chain."""
    letters = tuple(letters)
    if source not in graph.vertices:
        raise KeyError(f"unknown vertex {source!r}")
    at = source
    for i, letter in enumerate(letters):
        if not graph.has_edge(letter[0]):
            raise KeyError(f"unknown edge {letter[0]!r}")
        a, b = letter_ends(graph, letter)
        if a != at:
            raise CompositionError(f"letter {i} ({W.format_word([letter])}) starts at {a}, not {at}")
        at = b
    return GroupoidWord(source, at, letters)


def check_composable(graph: TopGraph, w: GroupoidWord) -> None:
    if make_word(graph, w.source, w.letters).target != w.target:
        raise CompositionError("word does not end at its declared target")


def reduce(w: GroupoidWord, graph: TopGraph | None = None) -> GroupoidWord:
    if graph is not None:
        check_composable(graph, w)
    return GroupoidWord(w.source, w.target, W.reduce_word(w.letters))


def compose(u: GroupoidWord, w: GroupoidWord) -> GroupoidWord:
    """``u`` followed by ``w``, reduced."""
    if u.target != w.source:
        raise CompositionError(f"cannot compose: {u.target} != {w.source}")
    return GroupoidWord(u.source, w.target, W.multiply(u.letters, w.letters))


def invert(w: GroupoidWord) -> GroupoidWord:
    return GroupoidWord(w.target, w.source, W.invert(w.letters))


def edge_word(graph: TopGraph, e: str) -> GroupoidWord:
    """The generator ``sigma(e)``."""
    x, y = graph.endpoints(e)
    return GroupoidWord(x, y, ((e, 1),))


def tree_word(tree: Tree, v: str, x: str) -> GroupoidWord:
    return GroupoidWord(v, x, tree.path(v, x))


def retract(tree: Tree, v: str, w: GroupoidWord) -> GroupoidWord:
    """``r_T(w) = gamma(v, x) w gamma(y, v)``, a loop at ``v``."""
    return GroupoidWord(
        v, v, W.multiply(tree.path(v, w.source), w.letters, tree.path(w.target, v))
    )


def vertex_group_basis(graph: TopGraph, tree: Tree, v: str) -> dict[str, GroupoidWord]:
    """Free basis of the vertex group at ``v``: ``e -> r_T(sigma(e))`` off the tree."""
    if not is_connected_graph(graph):
        raise DisconnectedGraphError("graph is not connected")
    validate_tree(graph, tree)
    in_tree = tree.edge_ids
    return {
        e: retract(tree, v, edge_word(graph, e))
        for e in graph.edges()
        if e not in in_tree
    }


def express_in_basis(graph: TopGraph, tree: Tree, v: str, w: GroupoidWord) -> W.Word:
    """Rewrite a loop at ``v`` over the non-basepoint points of ``G/T``.

    Each edge letter goes to its own class and tree letters vanish.
    """
    if w.source != v or w.target != v:
        raise CompositionError(f"expected a loop at {v}, got {w.source}->{w.target}")
    in_tree = tree.edge_ids
    return W.reduce_word(l for l in w.letters if l[0] not in in_tree)


def substitute_basis(basis: Mapping[str, GroupoidWord], v: str, word: W.Word) -> GroupoidWord:
    """Evaluate a word over basis letters as a loop at ``v``."""
    return GroupoidWord(v, v, W.substitute(word, {e: b.letters for e, b in basis.items()}))


def vertex_group_presentation(graph: TopGraph, tree: Tree, v: str, basepoint: str = "*"):
    """The pair ``(G/T, basis)`` presenting the vertex group at ``v``."""
    return quotient_by_tree(graph, tree, basepoint), vertex_group_basis(graph, tree, v)


# --- openness of the reduction preimage, stratum by stratum ------------------


class PredicateAcceptor:
    """Adapts a membership predicate on reduced words to the acceptor protocol.

    Configurations are reduced words, so any predicate works; the coset
    automata in :mod:`topofree.automaton` provide a much smaller state set.
    """

    def __init__(self, member: Callable[[W.Word], bool]):
        self.member = member

    def start(self):
        return ()

    def step(self, config, letter):
        if config and config[-1] == (letter[0], -letter[1]):
            return config[:-1]
        return config + (letter,)

    def accepts(self, config) -> bool:
        return bool(self.member(config))


def stratum_open_check(space: PointedFinSpace, member, depth: int) -> bool:
    """Is ``{w in (X+-)^n : member(reduce(w))}`` open for every ``n <= depth``?

    ``member`` is an acceptor (``start``/``step``/``accepts``) or a plain
    predicate.  Basepoint letters are the identity.  The product order is
    componentwise, so a set is open iff lowering one coordinate never leaves
    it; we search for such a lowering over reachable prefix configurations
    and distinguishing suffixes of the right length.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    acc = member if hasattr(member, "step") else PredicateAcceptor(member)
    X = space.space
    star = space.basepoint
    alphabet = [(p, d) for p in X.points for d in (1, -1)]

    def step(config, letter):
        return config if letter[0] == star else acc.step(config, letter)

    # lowerings (a, b): b strictly below a in X+- (inverse letters keep the order)
    lowerings = [
        ((a, d), (b, d))
        for a in X.points
        for b in X.down(a)
        if b != a
        for d in (1, -1)
    ]
    if not lowerings:
        return True

    @lru_cache(maxsize=None)
    def splits(c1, c2, k):
        # some suffix of length k is accepted after c1 but not after c2
        if k == 0:
            return acc.accepts(c1) and not acc.accepts(c2)
        if c1 == c2:
            return False
        return any(splits(step(c1, l), step(c2, l), k - 1) for l in alphabet)

    layers = [{acc.start()}]
    for _ in range(depth - 1):
        layers.append({step(c, l) for c in layers[-1] for l in alphabet})
    for n in range(1, depth + 1):
        for i in range(n):
            k = n - 1 - i
            for c in layers[i]:
                for a, b in lowerings:
                    if splits(step(c, a), step(c, b), k):
                        return False
    return True
