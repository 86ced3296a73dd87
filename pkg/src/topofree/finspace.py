"""Finite topological spaces stored as specialization preorders.

A finite space is determined by its minimal open sets ``U_p``.  We write
``x <= y`` when ``x`` lies in ``U_y``; the open sets are exactly the
down-closed subsets, and continuity of a map is monotonicity.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass


def block_name(block: Iterable[str]) -> str:
    """Default id for a class of points collapsed by a quotient."""
    members = sorted(block)
    if len(members) == 1:
        return members[0]
    return "[" + ",".join(members) + "]"


class FinSpace:
    """A finite space: sorted point ids plus the closed preorder.

    ``le`` may be any generating relation of pairs ``(x, y)`` meaning
    ``x <= y``; the reflexive-transitive closure is taken on construction.
    Instances are immutable.
    """

    __slots__ = ("points", "_down", "_hash")

    def __init__(self, points: Iterable[str] = (), le: Iterable[tuple[str, str]] = ()):
        pts = list(points)
        if len(set(pts)) != len(pts):
            dupes = sorted({p for p in pts if pts.count(p) > 1})
            raise ValueError(f"duplicate point ids: {dupes}")
        self.points: tuple[str, ...] = tuple(sorted(pts))
        gen: dict[str, set[str]] = {p: set() for p in self.points}
        for x, y in le:
            if x not in gen or y not in gen:
                raise KeyError(f"relation ({x}, {y}) mentions an unknown point")
            gen[y].add(x)
        down = {}
        for p in self.points:
            seen = {p}
            stack = [p]
            while stack:
                for x in gen[stack.pop()]:
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            down[p] = frozenset(seen)
        self._down: dict[str, frozenset[str]] = down
        self._hash = None

    @classmethod
    def discrete(cls, points: Iterable[str]) -> FinSpace:
        return cls(points)

    @classmethod
    def indiscrete(cls, points: Iterable[str]) -> FinSpace:
        pts = list(points)
        return cls(pts, [(x, y) for x in pts for y in pts])

    @classmethod
    def _from_down(cls, points: tuple[str, ...], down: dict[str, frozenset[str]]) -> FinSpace:
        # trusted constructor: ``down`` must already be a closed preorder
        obj = cls.__new__(cls)
        obj.points = points
        obj._down = down
        obj._hash = None
        return obj

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in self._down

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSpace):
            return NotImplemented
        return self.points == other.points and self._down == other._down

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.points, frozenset(self._down.items())))
        return self._hash

    def __repr__(self) -> str:
        rel = " ".join(f"{x}<={y}" for x, y in self.relation())
        return f"FinSpace({list(self.points)}{', ' + rel if rel else ''})"

    def le(self, x: str, y: str) -> bool:
        """True iff ``x`` lies in the minimal open set of ``y``."""
        return x in self._down[y]

    def down(self, p: str) -> frozenset[str]:
        return self._down[p]

    def up(self, p: str) -> frozenset[str]:
        return frozenset(q for q in self.points if p in self._down[q])

    def relation(self) -> list[tuple[str, str]]:
        """All non-reflexive pairs ``(x, y)`` with ``x <= y``, sorted."""
        return sorted((x, y) for y in self.points for x in self._down[y] if x != y)

    def is_open(self, subset: Iterable[str]) -> bool:
        s = set(subset)
        return all(self._down[p] <= s for p in s)

    def is_discrete(self) -> bool:
        return all(len(d) == 1 for d in self._down.values())


@dataclass(frozen=True)
class PointedFinSpace:
    space: FinSpace
    basepoint: str

    def __post_init__(self):
        if self.basepoint not in self.space:
            raise ValueError(f"basepoint {self.basepoint!r} is not a point of the space")

    @property
    def points(self) -> tuple[str, ...]:
        return self.space.points

    def letters(self) -> tuple[str, ...]:
        """Non-basepoint points: the free generators of the Graev group."""
        return tuple(p for p in self.space.points if p != self.basepoint)


@dataclass(frozen=True)
class ContinuousMap:
    """A map of finite spaces; call :func:`is_continuous` to check it."""

    source: FinSpace
    target: FinSpace
    assignment: Mapping[str, str]

    def __post_init__(self):
        missing = [p for p in self.source.points if p not in self.assignment]
        if missing:
            raise ValueError(f"assignment is not total, missing {missing}")
        bad = [v for v in self.assignment.values() if v not in self.target]
        if bad:
            raise ValueError(f"assignment leaves the target: {bad}")

    def __call__(self, p: str) -> str:
        return self.assignment[p]

    def preimage(self, subset: Iterable[str]) -> frozenset[str]:
        s = set(subset)
        return frozenset(p for p in self.source.points if self.assignment[p] in s)


def minimal_open(space: FinSpace, p: str) -> frozenset[str]:
    if p not in space:
        raise KeyError(f"unknown point {p!r}")
    return space.down(p)


def is_continuous(f: ContinuousMap) -> bool:
    """Monotonicity test; for finite spaces this is continuity."""
    src, tgt, a = f.source, f.target, f.assignment
    return all(tgt.le(a[x], a[y]) for y in src.points for x in src.down(y))


def subspace(space: FinSpace, subset: Iterable[str]) -> FinSpace:
    s = frozenset(subset)
    unknown = s - set(space.points)
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown)}")
    pts = tuple(p for p in space.points if p in s)
    return FinSpace._from_down(pts, {p: space.down(p) & s for p in pts})


def _normalize_partition(space: FinSpace, partition) -> dict[str, str]:
    if isinstance(partition, Mapping):
        assignment = dict(partition)
    else:
        assignment = {}
        for block in partition:
            block = list(block)
            if not block:
                raise ValueError("empty block in partition")
            name = block_name(block)
            for p in block:
                if p in assignment:
                    raise ValueError(f"point {p!r} appears in two blocks")
                assignment[p] = name
    missing = set(space.points) - set(assignment)
    extra = set(assignment) - set(space.points)
    if missing or extra:
        raise ValueError(
            f"invalid partition: missing {sorted(missing)}, unknown {sorted(extra)}"
        )
    return assignment


def quotient(space: FinSpace, partition) -> tuple[FinSpace, ContinuousMap]:
    """Quotient by a partition (blocks, or a mapping point -> class id).

    The class preorder is the transitive closure of the projected relation,
    which is exactly the specialization order of the quotient topology.
    """
    assignment = _normalize_partition(space, partition)
    classes = sorted(set(assignment.values()))
    projected = {
        (assignment[x], assignment[y]) for y in space.points for x in space.down(y)
    }
    q = FinSpace(classes, projected)
    return q, ContinuousMap(space, q, assignment)


def disjoint_union(*spaces: FinSpace) -> FinSpace:
    seen: set[str] = set()
    down: dict[str, frozenset[str]] = {}
    for sp in spaces:
        clash = seen.intersection(sp.points)
        if clash:
            raise ValueError(f"point ids are not disjoint: {sorted(clash)}")
        seen.update(sp.points)
        down.update((p, sp.down(p)) for p in sp.points)
    return FinSpace._from_down(tuple(sorted(seen)), down)


def wedge(left: PointedFinSpace, right: PointedFinSpace, name: str | None = None) -> PointedFinSpace:
    """Sum of two pointed spaces with the basepoints identified."""
    total = disjoint_union(left.space, right.space)
    joined = name or block_name([left.basepoint, right.basepoint])
    mapping = {p: p for p in total.points}
    mapping[left.basepoint] = mapping[right.basepoint] = joined
    if joined in total and joined not in (left.basepoint, right.basepoint):
        raise ValueError(f"wedge point id {joined!r} already used")
    q, _ = quotient(total, mapping)
    return PointedFinSpace(q, joined)


def plus(space: FinSpace, basepoint: str = "*") -> PointedFinSpace:
    """``X_+``: the space with a new isolated basepoint."""
    while basepoint in space:
        basepoint += "'"
    return PointedFinSpace(disjoint_union(space, FinSpace([basepoint])), basepoint)


def path_components(space: FinSpace) -> tuple[tuple[frozenset[str], ...], FinSpace]:
    """Connected components of the comparability graph and the discrete quotient.

    In a finite space comparable points are joined by a two-point path, so
    these are the path components.  Blocks are ordered by least member.
    """
    parent = {p: p for p in space.points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for y in space.points:
        for x in space.down(y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    blocks: dict[str, set[str]] = {}
    for p in space.points:
        blocks.setdefault(find(p), set()).add(p)
    partition = tuple(frozenset(blocks[r]) for r in sorted(blocks))
    return partition, FinSpace.discrete(block_name(b) for b in partition)


def component_of(space: FinSpace, p: str) -> frozenset[str]:
    for block in path_components(space)[0]:
        if p in block:
            return block
    raise KeyError(f"unknown point {p!r}")


def is_connected(space: FinSpace) -> bool:
    return len(path_components(space)[0]) == 1


def find_homeomorphism(x: FinSpace, y: FinSpace) -> dict[str, str] | None:
    """An order isomorphism ``x -> y`` if one exists (backtracking search)."""
    if len(x) != len(y):
        return None

    def signature(sp, p):
        return (len(sp.down(p)), len(sp.up(p)))

    sig_y: dict[tuple, list[str]] = {}
    for q in y.points:
        sig_y.setdefault(signature(y, q), []).append(q)
    sig_x = {p: signature(x, p) for p in x.points}
    if sorted(map(len, sig_y.values())) != sorted(
        map(len, _group(sig_x).values())
    ) or set(sig_y) != set(sig_x.values()):
        return None
    order = sorted(x.points, key=lambda p: (len(sig_y[sig_x[p]]), p))
    image: dict[str, str] = {}
    used: set[str] = set()

    def extend(i):
        if i == len(order):
            return True
        p = order[i]
        for q in sig_y[sig_x[p]]:
            if q in used:
                continue
            if all(
                x.le(p, r) == y.le(q, s) and x.le(r, p) == y.le(s, q)
                for r, s in image.items()
            ):
                image[p] = q
                used.add(q)
                if extend(i + 1):
                    return True
                del image[p]
                used.discard(q)
        return False

    return dict(image) if extend(0) else None


def _group(sigs: dict[str, tuple]) -> dict[tuple, list[str]]:
    out: dict[tuple, list[str]] = {}
    for p, s in sigs.items():
        out.setdefault(s, []).append(p)
    return out


def is_homeomorphic(x: FinSpace, y: FinSpace) -> tuple[bool, dict[str, str] | None]:
    h = find_homeomorphism(x, y)
    return h is not None, h


def relabel(space: FinSpace, mapping: Mapping[str, str]) -> FinSpace:
    """Rename points by an injective mapping."""
    if len(set(mapping[p] for p in space.points)) != len(space):
        raise ValueError("relabelling is not injective")
    return FinSpace(
        (mapping[p] for p in space.points),
        ((mapping[x], mapping[y]) for x, y in space.relation()),
    )
