"""Exact arithmetic in the free group F_d: freely reduced words.

Letters are nonzero signed integers: +i is the i-th generator (1-based),
-i its inverse.  A word literal spells letters as ascii characters,
lowercase for generators and uppercase for inverses; the empty string is
the identity.  "abAB" is a b a^-1 b^-1.

The canonical letter order interleaves each generator with its inverse,
a < a^-1 < b < b^-1 < ..., which fixes the enumeration order of spheres
and therefore the iteration order of everything downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import ParseError, RankMismatchError

_ALPHA = "abcdefghijklmnopqrstuvwxyz"


def letter_key(letter: int) -> int:
    """Position of a letter in the canonical order a < a^-1 < b < b^-1 < ..."""
    return ((abs(letter) - 1) << 1) | (letter < 0)


def alphabet(rank: int) -> list[int]:
    """All 2d letters in canonical order."""
    out = []
    for i in range(1, rank + 1):
        out.append(i)
        out.append(-i)
    return out


def _check_letters(letters, rank):
    if rank < 1:
        raise RankMismatchError(f"rank must be >= 1, got {rank}")
    for l in letters:
        if not isinstance(l, int) or l == 0 or abs(l) > rank:
            raise RankMismatchError(f"letter {l!r} invalid for rank {rank}")


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word.  Immutable, hashable, usable as a dict key."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        _check_letters(self.letters, self.rank)
        for i in range(len(self.letters) - 1):
            if self.letters[i + 1] == -self.letters[i]:
                raise ValueError(
                    f"not freely reduced at position {i + 1}: "
                    f"{self.letters[i]}, {self.letters[i + 1]}"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_word(self)

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)), self.rank)

    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self):
        """Length-then-lexicographic key in the canonical letter order."""
        return (len(self.letters), tuple(letter_key(l) for l in self.letters))


def identity(rank: int) -> Word:
    return Word((), rank)


def reduce_letters(letters, rank: int) -> Word:
    """Freely reduce a letter sequence by a single stack scan."""
    _check_letters(letters, rank)
    stack: list[int] = []
    for l in letters:
        if stack and stack[-1] == -l:
            stack.pop()
        else:
            stack.append(l)
    return Word(tuple(stack), rank)


def multiply(w1: Word, w2: Word) -> Word:
    """Reduced product.  Cancellation happens only at the seam."""
    if w1.rank != w2.rank:
        raise RankMismatchError(f"rank mismatch: {w1.rank} vs {w2.rank}")
    a, b = w1.letters, w2.letters
    k = 0
    m = min(len(a), len(b))
    while k < m and a[len(a) - 1 - k] == -b[k]:
        k += 1
    return Word(a[: len(a) - k] + b[k:], w1.rank)


def invert(w: Word) -> Word:
    return w.inverse()


def cyclically_reduce(w: Word) -> Word:
    """Strip matching first/last letters until the word is cyclically reduced."""
    letters = w.letters
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        letters = letters[1:-1]
    return Word(letters, w.rank)


def sphere_size(d: int, n: int) -> int:
    """|S(n)|, exact: 1 for n=0, else 2d(2d-1)^(n-1)."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    if n == 0:
        return 1
    return 2 * d * (2 * d - 1) ** (n - 1)


def ball_size(d: int, n: int) -> int:
    return sum(sphere_size(d, k) for k in range(n + 1))


def sphere(d: int, n: int) -> Iterator[Word]:
    """All reduced words of length exactly n, in canonical order, lazily."""
    if d < 2:
        raise RankMismatchError(f"rank must be >= 2, got {d}")
    if n < 0:
        raise ValueError("radius must be >= 0")
    if n == 0:
        yield Word((), d)
        return
    letters = alphabet(d)
    prefix: list[int] = []

    def rec() -> Iterator[Word]:
        if len(prefix) == n:
            yield Word(tuple(prefix), d)
            return
        last = prefix[-1] if prefix else 0
        for t in letters:
            if t != -last:
                prefix.append(t)
                yield from rec()
                prefix.pop()

    yield from rec()


def parse_word(text: str, rank: int) -> Word:
    """Parse a word literal; the result is reduced.

    Errors carry the 1-based position of the offending character.
    """
    letters = []
    for i, ch in enumerate(text):
        if ch in _ALPHA:
            idx = _ALPHA.index(ch) + 1
            sign = 1
        elif ch.lower() in _ALPHA:
            idx = _ALPHA.index(ch.lower()) + 1
            sign = -1
        else:
            raise ParseError(f"unknown letter {ch!r}", position=i + 1)
        if idx > rank:
            raise ParseError(f"letter {ch!r} exceeds rank {rank}", position=i + 1)
        letters.append(sign * idx)
    return reduce_letters(letters, rank)


def format_word(w: Word) -> str:
    out = []
    for l in w.letters:
        ch = _ALPHA[abs(l) - 1]
        out.append(ch if l > 0 else ch.upper())
    return "".join(out)


@dataclass(frozen=True, slots=True)
class FreeGroup:
    """Group context for distributions supported on free-group words."""

    rank: int

    @property
    def identity(self) -> Word:
        return Word((), self.rank)

    def multiply(self, a: Word, b: Word) -> Word:
        return multiply(a, b)

    def invert(self, a: Word) -> Word:
        return a.inverse()

    def validate_element(self, a) -> None:
        if not isinstance(a, Word) or a.rank != self.rank:
            raise RankMismatchError(f"{a!r} is not a rank-{self.rank} word")

    def element_label(self, a: Word) -> str:
        return format_word(a)

    def describe(self) -> str:
        return f"free:{self.rank}"
