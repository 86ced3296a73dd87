"""Top-graphs: a discrete vertex set and a finite edge space per ordered pair."""
from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

from .finspace import (
    FinSpace,
    PointedFinSpace,
    block_name,
    disjoint_union,
    path_components,
    plus,
    quotient,
    relabel,
)

INVERSE_SUFFIX = "^-1"


class DisconnectedGraphError(ValueError):
    pass


class TopGraph:
    """Vertices plus ``edge_space(x, y)``; empty pairs are simply absent."""

    __slots__ = ("vertices", "_spaces", "_ends")

    def __init__(self, vertices: Iterable[str], edge_spaces: Mapping[tuple[str, str], FinSpace] = {}):
        verts = list(vertices)
        if not verts:
            raise ValueError("a Top-graph needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex ids")
        self.vertices: tuple[str, ...] = tuple(sorted(verts))
        vset = set(verts)
        spaces: dict[tuple[str, str], FinSpace] = {}
        ends: dict[str, tuple[str, str]] = {}
        for (x, y), sp in sorted(edge_spaces.items()):
            if x not in vset or y not in vset:
                raise KeyError(f"edge pair ({x}, {y}) mentions an unknown vertex")
            if not len(sp):
                continue
            for e in sp.points:
                if e in ends:
                    raise ValueError(f"edge id {e!r} is used twice")
                ends[e] = (x, y)
            spaces[(x, y)] = sp
        self._spaces = spaces
        self._ends = ends

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x}->{y}: {list(sp.points)}" for (x, y), sp in self._spaces.items())
        return f"TopGraph({list(self.vertices)}; {pairs})"

    def __eq__(self, other):
        if not isinstance(other, TopGraph):
            return NotImplemented
        return self.vertices == other.vertices and self._spaces == other._spaces

    def __hash__(self):
        return hash((self.vertices, tuple(self._spaces.items())))

    def edge_space(self, x: str, y: str) -> FinSpace:
        return self._spaces.get((x, y), FinSpace())

    def pairs(self) -> list[tuple[str, str]]:
        """Ordered vertex pairs with a nonempty edge space."""
        return list(self._spaces)

    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(self._ends))

    def endpoints(self, e: str) -> tuple[str, str]:
        return self._ends[e]

    def has_edge(self, e: str) -> bool:
        return e in self._ends

    def total_edge_space(self) -> FinSpace:
        return disjoint_union(*self._spaces.values())


def inverse_id(e: str) -> str:
    return e + INVERSE_SUFFIX


def symmetrize(graph: TopGraph) -> TopGraph:
    """``G+-(x, y)``: ``G(x, y)`` plus a renamed copy of ``G(y, x)``."""
    spaces: dict[tuple[str, str], FinSpace] = {}
    for x in graph.vertices:
        for y in graph.vertices:
            back = graph.edge_space(y, x)
            flipped = relabel(back, {e: inverse_id(e) for e in back.points})
            spaces[(x, y)] = disjoint_union(graph.edge_space(x, y), flipped)
    return TopGraph(graph.vertices, spaces)


def pi0_graph(graph: TopGraph) -> tuple[TopGraph, dict[str, str]]:
    """Collapse each edge space to its path components.

    Returns the discrete graph and the edge map ``e -> [e]``.
    """
    spaces = {}
    q: dict[str, str] = {}
    for pair in graph.pairs():
        blocks, disc = path_components(graph.edge_space(*pair))
        spaces[pair] = disc
        for b in blocks:
            name = block_name(b)
            for e in b:
                q[e] = name
    return TopGraph(graph.vertices, spaces), q


def _vertex_components(vertices, links) -> int:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x, y in links:
        parent[find(x)] = find(y)
    return len({find(v) for v in vertices})


def is_connected_graph(graph: TopGraph) -> bool:
    return _vertex_components(graph.vertices, graph.pairs()) == 1


@dataclass(frozen=True)
class Tree:
    """A spanning tree given by concrete edge points and their endpoints."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge, source, target), sorted
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        adj: dict[str, list[tuple[str, int, str]]] = {v: [] for v in self.vertices}
        for e, x, y in self.edges:
            adj[x].append((e, 1, y))
            adj[y].append((e, -1, x))
        object.__setattr__(self, "_adj", adj)

    @classmethod
    def from_edges(cls, graph: TopGraph, edges: Iterable[str]) -> Tree:
        items = []
        for e in edges:
            if not graph.has_edge(e):
                raise KeyError(f"{e!r} is not an edge of the graph")
            items.append((e, *graph.endpoints(e)))
        return cls(graph.vertices, tuple(sorted(items)))

    @property
    def edge_ids(self) -> frozenset[str]:
        return frozenset(e for e, _, _ in self.edges)

    def path(self, v: str, x: str) -> tuple[tuple[str, int], ...]:
        """The unique reduced tree word from ``v`` to ``x``."""
        if v == x:
            return ()
        prev: dict[str, tuple[str, tuple[str, int]]] = {v: None}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for e, d, w in self._adj[u]:
                if w not in prev:
                    prev[w] = (u, (e, d))
                    if w == x:
                        queue.clear()
                        break
                    queue.append(w)
        if x not in prev:
            raise DisconnectedGraphError(f"{x!r} is not reachable from {v!r} in the tree")
        letters = []
        while x != v:
            u, letter = prev[x]
            letters.append(letter)
            x = u
        return tuple(reversed(letters))


def maximal_tree(
    graph: TopGraph, key: Callable[[str], object] | None = None, root: str | None = None
) -> Tree:
    """Breadth-first spanning tree of the path-component graph.

    Each path component of an edge space is one candidate edge, represented
    by its least point under ``key`` (default: the id).  The search starts
    at ``root`` (default: the least vertex) and scans incident components in
    ``key`` order.  Tree paths from the root are shortest paths, which keeps
    the vertex-group basis at the root Nielsen reduced.
    """
    if key is None:
        key = _identity
    _, q = pi0_graph(graph)
    reps: dict[str, str] = {}
    for e in graph.edges():
        c = q[e]
        if c not in reps or key(e) < key(reps[c]):
            reps[c] = e
    incident: dict[str, list[tuple[object, str, str]]] = {v: [] for v in graph.vertices}
    for rep in reps.values():
        x, y = graph.endpoints(rep)
        if x == y:
            continue
        incident[x].append((key(rep), rep, y))
        incident[y].append((key(rep), rep, x))
    for lst in incident.values():
        lst.sort(key=lambda t: (t[0], t[1]))
    if root is None:
        root = graph.vertices[0]
    elif root not in graph.vertices:
        raise KeyError(f"unknown vertex {root!r}")
    seen = {root}
    chosen = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for _, rep, w in incident[v]:
            if w not in seen:
                seen.add(w)
                chosen.append(rep)
                queue.append(w)
    if len(seen) != len(graph.vertices):
        raise DisconnectedGraphError("graph is not connected; no maximal tree")
    return Tree.from_edges(graph, chosen)


def _identity(e: str) -> str:
    return e


def validate_tree(graph: TopGraph, tree: Tree) -> None:
    """Raise ``ValueError`` unless ``tree`` is a discrete maximal tree of ``graph``."""
    if tree.vertices != graph.vertices:
        raise ValueError("tree does not touch exactly the graph's vertices")
    for e, x, y in tree.edges:
        if not graph.has_edge(e) or graph.endpoints(e) != (x, y):
            raise ValueError(f"tree edge {e!r} is not an edge {x}->{y} of the graph")
        if x == y:
            raise ValueError(f"tree edge {e!r} is a loop")
    if len(tree.edges) != len(graph.vertices) - 1:
        raise ValueError("tree has the wrong number of edges")
    links = [(x, y) for _, x, y in tree.edges]
    if _vertex_components(graph.vertices, links) != 1:
        raise ValueError("tree edges do not span the graph")
    total = graph.total_edge_space()
    ids = tree.edge_ids
    for e in ids:
        if len(total.down(e) & ids) > 1:
            raise ValueError(
                f"tree component not a singleton point: {e!r} is comparable to another tree edge"
            )


def quotient_by_tree(graph: TopGraph, tree: Tree, basepoint: str = "*") -> PointedFinSpace:
    """``G/T``: the total edge space with the tree points collapsed to ``*``.

    A one-vertex graph has the empty tree and yields ``G_+``.
    """
    validate_tree(graph, tree)
    total = graph.total_edge_space()
    if not tree.edges:
        return plus(total, basepoint)
    ids = tree.edge_ids
    while basepoint in total and basepoint not in ids:
        basepoint += "'"
    mapping = {e: (basepoint if e in ids else e) for e in total.points}
    q, _ = quotient(total, mapping)
    return PointedFinSpace(q, basepoint)
