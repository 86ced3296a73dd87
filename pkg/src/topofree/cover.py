"""Free Graev presentations of open finite-index subgroups of ``F_G(X, *)``.

The base Top-graph has two vertices ``a``, ``b`` and ``G(a, b) = X``; with
the tree ``{*}`` its vertex group at ``a`` is ``F_G(X, *)``, where a letter
``x`` stands for the loop ``x *^-1``.  An open subgroup is the full preimage
of a subgroup of the free group on the non-basepoint path components, so
its covering graph lifts every component of ``X`` whole.  Collapsing a
maximal tree of the cover yields the presenting space.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from . import words as W
from .automaton import CosetAutomaton, stallings_fold
from .finspace import (
    FinSpace,
    PointedFinSpace,
    block_name,
    find_homeomorphism,
    path_components,
    relabel,
    subspace,
)
from .groupoid import GroupoidWord, express_in_basis, tree_word, vertex_group_basis
from .topgraph import TopGraph, Tree, quotient_by_tree, validate_tree

DEFAULT_MAX_INDEX = 10_000


class NotOpenError(ValueError):
    pass


class InfiniteIndexError(ValueError):
    pass


class IndexTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupSpec:
    """``H = <generators>`` inside ``F_G(ambient)``."""

    ambient: PointedFinSpace
    generators: tuple[W.Word, ...]

    def __post_init__(self):
        letters = set(self.ambient.letters())
        gens = []
        for g in self.generators:
            for x, _ in g:
                if x == self.ambient.basepoint:
                    raise ValueError("generators may not use the basepoint letter")
                if x not in letters:
                    raise ValueError(f"letter {x!r} is not a point of the space")
            gens.append(W.reduce_word(g))
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def preimage(cls, ambient: PointedFinSpace, projected: CosetAutomaton) -> SubgroupSpec:
        """The full preimage of a finite-index subgroup given by its coset table
        over component letters (as named by :func:`component_map`)."""
        if not projected.is_complete():
            raise InfiniteIndexError("projected subgroup must have finite index")
        lifted = lift_automaton(ambient, projected)
        return cls(ambient, tuple(lifted.schreier_generators()))

    @classmethod
    def preimage_of(cls, ambient: PointedFinSpace, component_words: Iterable[W.Word]) -> SubgroupSpec:
        return cls.preimage(ambient, stallings_fold(component_words, component_letters(ambient)))


# --- components --------------------------------------------------------------


def component_map(ambient: PointedFinSpace) -> dict[str, str | None]:
    """Point -> component letter; ``None`` on the basepoint's component."""
    out: dict[str, str | None] = {}
    for block in path_components(ambient.space)[0]:
        name = None if ambient.basepoint in block else block_name(block)
        for p in block:
            out[p] = name
    return out


def component_letters(ambient: PointedFinSpace) -> tuple[str, ...]:
    return tuple(sorted({c for c in component_map(ambient).values() if c is not None}))


def component_representatives(ambient: PointedFinSpace) -> dict[str, str]:
    reps: dict[str, str] = {}
    for p, c in sorted(component_map(ambient).items()):
        if c is not None and c not in reps:
            reps[c] = p
    return reps


def component_projection(ambient: PointedFinSpace, word: W.Word) -> W.Word:
    """Image of ``word`` under ``F_G(X, *) -> F_G(pi0 X, [*])``."""
    return W.rename(word, component_map(ambient))


def component_relators(ambient: PointedFinSpace) -> list[W.Word]:
    """Normal generators of the kernel of the component projection."""
    rels: list[W.Word] = []
    for block in path_components(ambient.space)[0]:
        members = sorted(block)
        if ambient.basepoint in block:
            rels.extend(((x, 1),) for x in members if x != ambient.basepoint)
        else:
            m = members[0]
            rels.extend(((m, 1), (y, -1)) for y in members[1:])
    return rels


def lift_automaton(ambient: PointedFinSpace, projected: CosetAutomaton) -> CosetAutomaton:
    """Coset table over points: each point acts as its component."""
    comp = component_map(ambient)
    edges = []
    for x in ambient.letters():
        c = comp[x]
        for s in range(projected.size):
            edges.append((s, x, s if c is None else projected.trans[(s, c, 1)]))
    return CosetAutomaton(ambient.letters(), projected.size, edges)


# --- openness ------------------------------------------------------------------


@dataclass(frozen=True)
class OpenDecision:
    is_open: bool
    automaton: CosetAutomaton  # folded graph of H over point letters
    projected: CosetAutomaton | None = None  # H-bar over component letters, when open
    witness: W.Word | None = None  # kernel element outside H
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_open


def decide_open(spec: SubgroupSpec) -> OpenDecision:
    """Is ``H`` the full preimage of its component projection?

    ``H`` is folded over the point alphabet.  If some conjugate of a kernel
    relator is missing from ``H`` it is reported as the witness.  If all
    relators read loops at every state of the folded graph, the graph's
    edges for the points of one component run in parallel and the projection
    is read off directly.  A finitely generated subgroup containing a
    nontrivial normal subgroup has finite index, so an incomplete folded
    graph with a nontrivial kernel is never open; a witness is then found
    one letter past a missing edge.
    """
    amb = spec.ambient
    A = stallings_fold(spec.generators, amb.letters())
    rels = component_relators(amb)
    T = A.transversal()
    for s in sorted(T):
        for r in rels:
            if A.read(r, s) != s:
                w = W.multiply(T[s], r, W.invert(T[s]))
                return OpenDecision(False, A, witness=w, reason=_reason(r, w))
    if rels and not A.is_complete():
        for s in sorted(T):
            for letter in A.signed_letters():
                if (s, *letter) in A.trans:
                    continue
                g = T[s] + (letter,)
                for r in rels:
                    w = W.multiply(g, r, W.invert(g))
                    if not A.contains(w):
                        return OpenDecision(False, A, witness=w, reason=_reason(r, w))
        raise AssertionError("incomplete folded graph without a kernel witness")
    comp = component_map(amb)
    reps = component_representatives(amb)
    letters = component_letters(amb)
    edges = [
        (s, c, A.trans[(s, reps[c], 1)])
        for c in letters
        for s in range(A.size)
        if (s, reps[c], 1) in A.trans
    ]
    projected = CosetAutomaton(letters, A.size, edges)
    assert all(comp[x] is None or comp[x] in letters for x in amb.letters())
    return OpenDecision(True, A, projected=projected, reason="subgroup contains the component kernel")


def _reason(relator: W.Word, witness: W.Word) -> str:
    if witness == relator:
        return f"component relator {W.format_word(relator)} not in subgroup"
    return (
        f"conjugate {W.format_word(witness)} of component relator "
        f"{W.format_word(relator)} not in subgroup"
    )


# --- the covering graph ----------------------------------------------------------

BASE_SOURCE, BASE_TARGET = "a", "b"


def base_graph(ambient: PointedFinSpace) -> tuple[TopGraph, Tree]:
    """``G(a, b) = X`` with the tree ``{*}``."""
    g = TopGraph([BASE_SOURCE, BASE_TARGET], {(BASE_SOURCE, BASE_TARGET): ambient.space})
    return g, Tree.from_edges(g, [ambient.basepoint])


def source_vertex(s: int) -> str:
    return f"{BASE_SOURCE}{s}"


def target_vertex(s: int) -> str:
    return f"{BASE_TARGET}{s}"


def lift_id(x: str, s: int) -> str:
    return f"{x}@{s}"


@dataclass(frozen=True)
class CoveringTopGraph:
    ambient: PointedFinSpace
    base: TopGraph
    total: TopGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    automaton: CosetAutomaton  # coset table of H-bar over component letters
    _lifts: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        lifts = {}
        for e in self.total.edges():
            x, y = self.total.endpoints(e)
            lifts[(x, self.edge_map[e], 1)] = e
            lifts[(y, self.edge_map[e], -1)] = e
        object.__setattr__(self, "_lifts", lifts)

    @property
    def index(self) -> int:
        return self.automaton.size

    def lift(self, base_word: W.Word, start: str) -> GroupoidWord:
        """Unique lift of a base-graph path starting at vertex ``start``."""
        at = start
        letters = []
        for e, d in base_word:
            lifted = self._lifts.get((at, e, d))
            if lifted is None:
                raise ValueError(f"cannot lift {e!r} at {at!r}")
            letters.append((lifted, d))
            x, y = self.total.endpoints(lifted)
            at = y if d > 0 else x
        return GroupoidWord(start, at, tuple(letters))

    def project(self, w: GroupoidWord) -> GroupoidWord:
        return GroupoidWord(
            self.vertex_map[w.source],
            self.vertex_map[w.target],
            tuple((self.edge_map[e], d) for e, d in w.letters),
        )


def schreier_cover(spec: SubgroupSpec, max_index: int = DEFAULT_MAX_INDEX) -> CoveringTopGraph:
    """Covering Top-graph of the base graph belonging to ``H``.

    Vertices ``a<s>``, ``b<s>`` for each coset ``s`` of ``H-bar``; the lift
    of a point ``x`` at ``a<s>`` is ``x@s`` and runs to ``b<s.c>`` where
    ``c`` is the component of ``x`` (``b<s>`` on the basepoint component).
    """
    decision = decide_open(spec)
    if not decision:
        raise NotOpenError(decision.reason)
    C = decision.projected
    if not C.is_complete():
        raise InfiniteIndexError("projected subgroup has infinite index; the cover is infinite")
    if C.size > max_index:
        raise IndexTooLargeError(f"index {C.size} exceeds the cap {max_index}")
    amb = spec.ambient
    X = amb.space
    comp = component_map(amb)
    base, _ = base_graph(amb)
    groups: dict[tuple[str, str], list[str]] = {}
    edge_map: dict[str, str] = {}
    for s in range(C.size):
        for x in X.points:
            t = s if comp[x] is None else C.trans[(s, comp[x], 1)]
            groups.setdefault((source_vertex(s), target_vertex(t)), []).append(x)
            edge_map[lift_id(x, s)] = x
    spaces = {}
    for (y1, y2), pts in groups.items():
        s = int(y1[len(BASE_SOURCE):])
        spaces[(y1, y2)] = relabel(subspace(X, pts), {x: lift_id(x, s) for x in pts})
    vertex_map = {source_vertex(s): BASE_SOURCE for s in range(C.size)}
    vertex_map.update({target_vertex(s): BASE_TARGET for s in range(C.size)})
    total = TopGraph(vertex_map, spaces)
    return CoveringTopGraph(amb, base, total, vertex_map, edge_map, C)


def covering_violations(cover: CoveringTopGraph) -> list[str]:
    """Check the covering decomposition against the base graph."""
    problems = []
    X = cover.ambient.space
    blocks = path_components(X)[0]
    for s in range(cover.index):
        y1 = source_vertex(s)
        seen: list[str] = []
        for y2 in cover.total.vertices:
            part = cover.total.edge_space(y1, y2)
            if not len(part):
                continue
            origin = {e: cover.edge_map[e] for e in part.points}
            image = set(origin.values())
            seen.extend(origin.values())
            if any(not (b <= image or b.isdisjoint(image)) for b in blocks):
                problems.append(f"G~({y1},{y2}) is not a union of whole components")
            if relabel(part, origin) != subspace(X, image):
                problems.append(f"projection is not an isomorphism on G~({y1},{y2})")
        if sorted(seen) != sorted(X.points):
            problems.append(f"edges out of {y1} do not partition X")
    for y in cover.total.vertices:
        if any(len(cover.total.edge_space(x, y)) for x in cover.total.vertices if x[0] == BASE_TARGET):
            problems.append(f"edges run out of a vertex over {BASE_TARGET}")
    return problems


# --- presentations -----------------------------------------------------------------


@dataclass(frozen=True)
class GraevPresentation:
    """``H = F_G(space)``: each non-basepoint point goes to a word of ``H``."""

    ambient: PointedFinSpace
    space: PointedFinSpace
    generator_words: Mapping[str, W.Word]
    origin: Mapping[str, str]  # point of space -> point of X it lifts
    tree: Tree
    transversal: Mapping[int, W.Word]  # coset -> F_G word of the tree path a0 -> a<s>
    automaton: CosetAutomaton
    cover: CoveringTopGraph | None = field(default=None, compare=False, repr=False)

    def generators(self) -> list[W.Word]:
        return [self.generator_words[p] for p in sorted(self.generator_words)]

    def substitute(self, word: W.Word) -> W.Word:
        """Evaluate a word over presentation points in ``F_G(X, *)``."""
        return W.substitute(word, self.generator_words)

    def express(self, word: W.Word) -> W.Word:
        """Rewrite an element of ``H`` over the presentation points."""
        if self.cover is None:
            raise ValueError("presentation carries no cover; rebuild it with subgroup_basis")
        star = self.ambient.basepoint
        loop: list[W.Letter] = []
        for x, d in W.reduce_word(word):
            loop.extend([(x, 1), (star, -1)] if d > 0 else [(star, 1), (x, -1)])
        root = source_vertex(0)
        lifted = self.cover.lift(tuple(loop), root)
        if lifted.target != root:
            raise ValueError(f"{W.format_word(word)} is not in the subgroup")
        return express_in_basis(self.cover.total, self.tree, root, lifted)


def _tree_edges(ambient: PointedFinSpace, C: CosetAutomaton) -> list[str]:
    """Every basepoint lift plus the breadth-first coset transversal."""
    reps = component_representatives(ambient)
    edges = [lift_id(ambient.basepoint, s) for s in range(C.size)]
    seen = {0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for c, d in C.signed_letters():
            t = C.trans[(s, c, d)]
            if t not in seen:
                seen.add(t)
                queue.append(t)
                edges.append(lift_id(reps[c], s if d > 0 else t))
    return edges


def subgroup_basis(spec: SubgroupSpec, max_index: int = DEFAULT_MAX_INDEX) -> GraevPresentation:
    """Free Graev presentation of an open subgroup of finite index."""
    cover = schreier_cover(spec, max_index)
    amb = spec.ambient
    total = cover.total
    tree = Tree.from_edges(total, _tree_edges(amb, cover.automaton))
    validate_tree(total, tree)
    Q = quotient_by_tree(total, tree)
    root = source_vertex(0)
    base, base_tree = base_graph(amb)

    def to_graev(w: GroupoidWord) -> W.Word:
        return express_in_basis(base, base_tree, BASE_SOURCE, cover.project(w))

    basis = vertex_group_basis(total, tree, root)
    words = {e: to_graev(loop) for e, loop in basis.items()}
    transversal = {
        s: to_graev(
            GroupoidWord(root, root, tree_word(tree, root, source_vertex(s)).letters)
        )
        if s
        else ()
        for s in range(cover.index)
    }
    origin = {e: cover.edge_map[e] for e in words}
    return GraevPresentation(amb, Q, words, origin, tree, transversal, cover.automaton, cover)


# --- verification --------------------------------------------------------------------


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, passed, detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, p, _ in self.checks if not p]

    def lines(self) -> list[str]:
        return [
            f"{name} {'pass' if p else 'fail'}" + (f" {detail}" if detail else "")
            for name, p, detail in self.checks
        ]


CHECK_NAMES = (
    "membership",
    "same-subgroup",
    "rank",
    "component-homeomorphism",
    "nielsen",
    "injective",
)


def verify_presentation(spec: SubgroupSpec, pres: GraevPresentation) -> VerificationReport:
    """Re-check a presentation using only folding and finite-space tools."""
    rep = VerificationReport()
    amb = spec.ambient
    X = amb.space
    Q = pres.space
    points = [p for p in Q.points if p != Q.basepoint]
    letters = amb.letters()

    # (i) membership in H
    H = stallings_fold(spec.generators, letters)
    outside = [p for p in points if not H.contains(pres.generator_words.get(p, ()))]
    rep.add("membership", not outside, f"outside H: {outside}" if outside else "")

    # (ii) the words generate H itself
    target = stallings_fold(list(spec.generators) + component_relators(amb), letters)
    got = stallings_fold([pres.generator_words.get(p, ()) for p in points], letters)
    rep.add("same-subgroup", got == target, "" if got == target else "generated subgroup differs")

    # (iii) Nielsen-Schreier count at component level
    projected = stallings_fold(
        [component_projection(amb, g) for g in spec.generators], component_letters(amb)
    )
    r = len(component_letters(amb))
    n = projected.index
    q_blocks = [b for b in path_components(Q.space)[0] if Q.basepoint not in b]
    if n is None:
        rep.add("rank", False, "projected subgroup has infinite index")
    else:
        expected = n * (r - 1) + 1
        rep.add(
            "rank",
            len(q_blocks) == expected,
            f"{len(q_blocks)} = {n}*({r}-1)+1" if len(q_blocks) == expected
            else f"{len(q_blocks)} != {n}*({r}-1)+1 = {expected}",
        )

    # (iv) each non-basepoint component of Q is a copy of its source component
    bad = []
    x_blocks = path_components(X)[0]
    for block in q_blocks:
        try:
            image = {pres.origin[p] for p in block}
        except KeyError as exc:
            bad.append(f"no origin for {exc.args[0]}")
            continue
        source = next((b for b in x_blocks if image <= b), None)
        K = subspace(Q.space, block)
        if source is None or image != source or len(image) != len(block):
            bad.append(f"{sorted(block)} is not a bijective copy of a component")
        elif relabel(K, {p: pres.origin[p] for p in block}) != subspace(X, source):
            bad.append(f"{sorted(block)}: origin map is not an isomorphism")
        elif find_homeomorphism(K, subspace(X, source)) is None:
            bad.append(f"{sorted(block)} is not homeomorphic to {sorted(source)}")
    rep.add("component-homeomorphism", not bad, "; ".join(bad))

    # (v) component-level words: constant on Q-components and Nielsen reduced
    comp_words = []
    incoherent = []
    for block in q_blocks:
        images = {component_projection(amb, pres.generator_words.get(p, ())) for p in block}
        if len(images) != 1:
            incoherent.append(sorted(block))
        comp_words.append(min(images))
    problems = [f"incoherent component {b}" for b in incoherent]
    problems += W.nielsen_violations(comp_words)
    rep.add("nielsen", not problems, "; ".join(problems[:3]))

    # distinct points give distinct nontrivial words
    ws = [pres.generator_words.get(p, ()) for p in points]
    inj = len(set(ws)) == len(ws) and all(ws) and set(pres.generator_words) == set(points)
    rep.add("injective", inj, "" if inj else "generator map is not injective on Q \\ {*}")
    return rep
