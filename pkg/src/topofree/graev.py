"""Graev versus Markov free topological groups on finite spaces.

``F_G(X, *)`` is connected exactly when ``X`` is.  When ``X`` splits as a
sum of open pieces ``A1 + A2`` with ``* = e1 in A1`` and ``e2 in A2``, the
Graev group is the Markov group of the wedge ``A1 v A2`` and the two
letterwise rewriters below are mutually inverse isomorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .finspace import (
    FinSpace,
    PointedFinSpace,
    component_of,
    is_connected,
    plus,
    subspace,
    wedge,
)


@dataclass(frozen=True)
class MarkovWitness:
    space: PointedFinSpace
    first: frozenset[str]  # A1, contains the basepoint e1
    second: frozenset[str]  # A2
    e2: str
    wedge: PointedFinSpace

    @property
    def e1(self) -> str:
        return self.space.basepoint

    @property
    def z(self) -> str:
        return self.wedge.basepoint

    def wedge_point(self, a: str) -> str:
        """The quotient map ``X -> A1 v A2``."""
        return self.z if a in (self.e1, self.e2) else a


@dataclass(frozen=True)
class Classification:
    connected: bool
    witness: MarkovWitness | None = None

    def __str__(self) -> str:
        return "connected" if self.connected else "disconnected"


def markov_witness(space: PointedFinSpace, first, e2: str | None = None) -> MarkovWitness:
    """Witness for a chosen clopen ``A1`` containing the basepoint."""
    X = space.space
    first = frozenset(first)
    second = frozenset(X.points) - first
    if space.basepoint not in first:
        raise ValueError("A1 must contain the basepoint")
    if not second:
        raise ValueError("A2 is empty; the space does not split")
    if not (X.is_open(first) and X.is_open(second)):
        raise ValueError("A1 and A2 must both be open")
    e2 = min(second) if e2 is None else e2
    if e2 not in second:
        raise ValueError(f"e2 = {e2!r} is not in A2")
    w = wedge(
        PointedFinSpace(subspace(X, first), space.basepoint),
        PointedFinSpace(subspace(X, second), e2),
    )
    return MarkovWitness(space, first, second, e2, w)


def classify(space: PointedFinSpace) -> Classification:
    """Connected, or disconnected with ``A1`` = the basepoint's component."""
    if is_connected(space.space):
        return Classification(True)
    first = component_of(space.space, space.basepoint)
    return Classification(False, markov_witness(space, first))


def _check_letters(word: W.Word, allowed, what: str) -> None:
    for x, _ in word:
        if x not in allowed:
            raise ValueError(f"letter {x!r} is not {what}")


def graev_to_markov(witness: MarkovWitness, word: W.Word) -> W.Word:
    """``a -> q(a) z^-1`` on ``A1``, ``a -> q(a)`` on ``A2``."""
    _check_letters(word, witness.space.space, "a point of X")
    z = witness.z
    images: dict[str, W.Word] = {}
    for a in witness.first:
        if a != witness.e1:
            images[a] = ((a, 1), (z, -1))
    for a in witness.second:
        images[a] = ((witness.wedge_point(a), 1),)
    return W.substitute(word, images)


def markov_to_graev(witness: MarkovWitness, word: W.Word) -> W.Word:
    """``z -> e2``, ``a -> a e2`` on ``A1``, ``a -> a`` on ``A2``."""
    _check_letters(word, witness.wedge.space, "a point of the wedge")
    e2 = witness.e2
    images: dict[str, W.Word] = {witness.z: ((e2, 1),)}
    for a in witness.first:
        if a != witness.e1:
            images[a] = ((a, 1), (e2, 1))
    for a in witness.second:
        if a != e2:
            images[a] = ((a, 1),)
    return W.substitute(word, images)


def markov_as_graev(space: FinSpace, basepoint: str = "*") -> PointedFinSpace:
    """``F_M(X) = F_G(X_+, *)``."""
    return plus(space, basepoint)


def is_markov_free(presentation_space: PointedFinSpace) -> bool:
    """A group presented as ``F_G(Q, *)`` is Markov-free iff ``Q`` is disconnected."""
    return not classify(presentation_space).connected
