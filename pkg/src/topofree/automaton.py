"""Subgroup graphs of free groups: Stallings folding and coset automata."""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence

from . import words as W


class CosetAutomaton:
    """Deterministic, inverse-closed labelled graph with base state 0.

    ``trans[(s, x, d)]`` is the state reached from ``s`` by the letter
    ``(x, d)``.  When the graph is complete it is the action of the free
    group on the right cosets of a subgroup; in general it is the folded
    core graph, and a reduced word lies in the subgroup iff it reads a
    loop at 0.
    """

    __slots__ = ("letters", "size", "trans")

    def __init__(self, letters: Iterable[str], size: int, edges: Iterable[tuple[int, str, int]]):
        self.letters: tuple[str, ...] = tuple(sorted(set(letters)))
        self.size = size
        known = set(self.letters)
        trans: dict[tuple[int, str, int], int] = {}
        for s, x, t in edges:
            if x not in known:
                raise ValueError(f"letter {x!r} is not in the alphabet")
            if not (0 <= s < size and 0 <= t < size):
                raise ValueError(f"edge ({s}, {x}, {t}) leaves the state set")
            for key, val in (((s, x, 1), t), ((t, x, -1), s)):
                if trans.get(key, val) != val:
                    raise ValueError(f"automaton is not deterministic at {key}")
                trans[key] = val
        self.trans = trans

    @classmethod
    def from_table(cls, letters: Sequence[str], table: Mapping[str, Sequence[int]]) -> CosetAutomaton:
        """From permutations: ``table[x][s]`` is the image of coset ``s`` under ``x``."""
        size = len(next(iter(table.values()))) if table else 1
        edges = [(s, x, t) for x in letters for s, t in enumerate(table[x])]
        return cls(letters, size, edges)

    def edges(self) -> list[tuple[int, str, int]]:
        return sorted((s, x, t) for (s, x, d), t in self.trans.items() if d > 0)

    def signed_letters(self) -> list[W.Letter]:
        return [(x, d) for x in self.letters for d in (1, -1)]

    def __repr__(self) -> str:
        return f"CosetAutomaton(letters={list(self.letters)}, size={self.size}, edges={self.edges()})"

    def __eq__(self, other):
        if not isinstance(other, CosetAutomaton):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.letters == b.letters and a.size == b.size and a.trans == b.trans

    def __hash__(self):
        c = self.canonical()
        return hash((c.letters, c.size, tuple(c.edges())))

    def read(self, word: Iterable[W.Letter], start: int = 0) -> int | None:
        s = start
        for x, d in word:
            s = self.trans.get((s, x, d))
            if s is None:
                return None
        return s

    def contains(self, word: Iterable[W.Letter]) -> bool:
        return self.read(W.reduce_word(word)) == 0

    def is_complete(self) -> bool:
        return len(self.trans) == 2 * self.size * len(self.letters)

    @property
    def index(self) -> int | None:
        """Index of the subgroup, or ``None`` when it is infinite."""
        return self.size if self.is_complete() else None

    def transversal(self) -> dict[int, W.Word]:
        """Breadth-first Schreier transversal: state -> shortest-least word."""
        words = {0: ()}
        queue = deque([0])
        while queue:
            s = queue.popleft()
            for x, d in self.signed_letters():
                t = self.trans.get((s, x, d))
                if t is not None and t not in words:
                    words[t] = words[s] + ((x, d),)
                    queue.append(t)
        return words

    def canonical(self) -> CosetAutomaton:
        """Renumber states in breadth-first discovery order."""
        order = list(self.transversal())
        if len(order) != self.size:
            raise ValueError("automaton is not connected from the base state")
        new = {s: i for i, s in enumerate(order)}
        return CosetAutomaton(
            self.letters, self.size, ((new[s], x, new[t]) for s, x, t in self.edges())
        )

    def schreier_generators(self) -> list[W.Word]:
        """Nontrivial ``T_s x T_{sx}^-1`` for a complete automaton."""
        if not self.is_complete():
            raise ValueError("Schreier generators need a complete coset table")
        T = self.transversal()
        gens = []
        for s in sorted(T):
            for x in self.letters:
                g = W.multiply(T[s], ((x, 1),), W.invert(T[self.trans[(s, x, 1)]]))
                if g:
                    gens.append(g)
        return gens

    # word-acceptor protocol (see groupoid.stratum_open_check); a
    # configuration is (state, reduced tail read off the graph)
    def start(self):
        return (0, ())

    def step(self, config, letter):
        s, tail = config
        if tail:
            if tail[-1] == (letter[0], -letter[1]):
                return (s, tail[:-1])
            return (s, tail + (letter,))
        t = self.trans.get((s, letter[0], letter[1]))
        return (s, (letter,)) if t is None else (t, ())

    def accepts(self, config) -> bool:
        return config == (0, ())


def stallings_fold(generators: Iterable[Iterable[W.Letter]], letters: Iterable[str] = ()) -> CosetAutomaton:
    """Folded core graph of the subgroup generated by ``generators``.

    Petals are glued at state 0, equally labelled edges are identified
    (least state, least letter first) until the graph is deterministic,
    hanging trees are pruned, and states are renumbered canonically.
    """
    gens = [W.reduce_word(g) for g in generators]
    alphabet = set(letters)
    for g in gens:
        alphabet.update(x for x, _ in g)
    edges: list[tuple[int, str, int]] = []
    size = 1
    for g in gens:
        if not g:
            continue
        cur = 0
        for i, (x, d) in enumerate(g):
            nxt = 0 if i == len(g) - 1 else size
            if nxt:
                size += 1
            edges.append((cur, x, nxt) if d > 0 else (nxt, x, cur))
            cur = nxt

    parent = list(range(size))

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    changed = True
    while changed:
        changed = False
        seen: dict[tuple[int, str, int], int] = {}
        for s, x, t in sorted(edges):
            s, t = find(s), find(t)
            for key, val in (((s, x, 1), t), ((t, x, -1), s)):
                other = seen.get(key)
                if other is None:
                    seen[key] = val
                    continue
                a, b = find(other), find(val)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    changed = True
        edges = sorted({(find(s), x, find(t)) for s, x, t in edges})

    # prune hanging trees away from the base state
    edges_set = set(edges)
    while True:
        degree: dict[int, int] = {}
        for s, _, t in edges_set:
            degree[s] = degree.get(s, 0) + 1
            degree[t] = degree.get(t, 0) + 1
        leaves = {v for v, k in degree.items() if k == 1 and v != 0}
        if not leaves:
            break
        edges_set = {(s, x, t) for s, x, t in edges_set if s not in leaves and t not in leaves}
    states = sorted({0} | {s for s, _, _ in edges_set} | {t for _, _, t in edges_set})
    new = {s: i for i, s in enumerate(states)}
    folded = CosetAutomaton(alphabet, len(states), ((new[s], x, new[t]) for s, x, t in edges_set))
    return folded.canonical()


def same_subgroup(a: CosetAutomaton, b: CosetAutomaton) -> bool:
    """Equality of subgroups via canonical folded graphs (alphabets must agree)."""
    return a.letters == b.letters and a == b
