"""Signed-letter words and free reduction.

A letter is ``(id, sign)`` with sign ``+1`` or ``-1``; a word is a tuple of
letters.  Text syntax: whitespace-separated ids, ``^-1`` marks an inverse,
and ``1`` alone is the identity.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping

Letter = tuple[str, int]
Word = tuple[Letter, ...]

IDENTITY: Word = ()


def invert(word: Iterable[Letter]) -> Word:
    return tuple((x, -d) for x, d in reversed(tuple(word)))


def reduce_word(word: Iterable[Letter]) -> Word:
    """Delete adjacent ``x^d x^-d`` pairs until none remain."""
    out: list[Letter] = []
    for x, d in word:
        if out and out[-1] == (x, -d):
            out.pop()
        else:
            out.append((x, d))
    return tuple(out)


def is_reduced(word: Iterable[Letter]) -> bool:
    w = tuple(word)
    return all(w[i] != (w[i + 1][0], -w[i + 1][1]) for i in range(len(w) - 1))


def multiply(*words: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for w in words:
        out.extend(w)
    return reduce_word(out)


def power(word: Word, n: int) -> Word:
    base = word if n >= 0 else invert(word)
    return reduce_word(base * abs(n))


def substitute(word: Iterable[Letter], images: Mapping[str, Word]) -> Word:
    """Apply the homomorphism given on generators; missing letters map to 1."""
    out: list[Letter] = []
    for x, d in word:
        image = images.get(x, IDENTITY)
        out.extend(image if d > 0 else invert(image))
    return reduce_word(out)


def rename(word: Iterable[Letter], mapping: Mapping[str, str | None]) -> Word:
    """Letterwise renaming; letters mapped to ``None`` are deleted."""
    out = []
    for x, d in word:
        y = mapping[x]
        if y is not None:
            out.append((y, d))
    return reduce_word(out)


def format_word(word: Iterable[Letter]) -> str:
    w = tuple(word)
    if not w:
        return "1"
    return " ".join(x if d > 0 else f"{x}^-1" for x, d in w)


def parse_word(text: str, alphabet: Iterable[str] | None = None) -> Word:
    """Parse the text syntax; ``alphabet`` (if given) restricts letters.

    Tokens ``x^n`` for integer ``n`` are accepted as powers.  The token
    ``1`` is the identity factor.
    """
    allowed = None if alphabet is None else set(alphabet)
    letters: list[Letter] = []
    for tok in text.split():
        if tok == "1":
            continue
        name, caret, exp = tok.partition("^")
        if not name:
            raise ValueError(f"malformed letter {tok!r}")
        n = 1
        if caret:
            try:
                n = int(exp)
            except ValueError:
                raise ValueError(f"malformed exponent in {tok!r}") from None
        if allowed is not None and name not in allowed:
            raise ValueError(f"unknown letter {name!r}")
        sign = 1 if n > 0 else -1
        letters.extend([(name, sign)] * abs(n))
    return tuple(letters)


def parse_word_list(text: str, alphabet: Iterable[str] | None = None) -> list[Word]:
    """Parse ``"w1; w2; ..."``; empty entries are skipped."""
    alphabet = None if alphabet is None else tuple(alphabet)
    return [parse_word(part, alphabet) for part in text.split(";") if part.strip()]


def nielsen_violations(basis: Iterable[Word]) -> list[str]:
    """Failures of the Nielsen conditions N0-N2 for a set of reduced words.

    N0: no word is trivial.  N1: ``|uv| >= |u|, |v|`` whenever ``uv != 1``,
    i.e. a product never cancels more than half of either factor.  N2:
    ``|uvw| > |u| - |v| + |w|`` whenever ``uv != 1`` and ``vw != 1``.
    """
    base = [reduce_word(w) for w in basis]
    problems = [f"N0: trivial word at position {i}" for i, w in enumerate(base) if not w]
    signed = [w for w in base if w] + [invert(w) for w in base if w]
    for u in signed:
        for v in signed:
            if v == invert(u):
                continue
            uv = multiply(u, v)
            if len(uv) < max(len(u), len(v)):
                problems.append(f"N1: {format_word(u)} * {format_word(v)} -> {format_word(uv)}")
    for u in signed:
        for v in signed:
            if v == invert(u):
                continue
            for w in signed:
                if w == invert(v):
                    continue
                if len(multiply(u, v, w)) <= len(u) - len(v) + len(w):
                    problems.append(
                        f"N2: {format_word(u)} * {format_word(v)} * {format_word(w)}"
                    )
    return problems
