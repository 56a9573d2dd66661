"""Symbolic words and word-metric balls in free and free-abelian groups.

Words are kept in normal form (free reduction, or a sorted exponent vector
written out letter by letter), so the letter count of a word *is* its
word-metric length. Balls enumerate all normal-form words of length <= n in
a fixed deterministic order: level by level, lexicographic by generator
index then sign within a level. Every non-identity ball element records the
parent word it extends and the extending letter, so orbit evaluation can
reuse parent images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from .errors import MalformedInputError

# A letter is (generator index, sign), sign in {+1, -1}.
Letter = tuple[int, int]

FREE = "free"
FREE_ABELIAN = "free-abelian"

_NAMES = "abcdefghijklmnopqrstuvwxyz"


def _letter_key(letter: Letter) -> tuple[int, int]:
    gen, sign = letter
    return (gen, 0 if sign > 0 else 1)


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated group: `free` or `free-abelian` of given rank."""

    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in (FREE, FREE_ABELIAN):
            raise MalformedInputError(f"unknown group kind {self.kind!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise MalformedInputError("group rank must be a positive integer")


@dataclass(frozen=True)
class Word:
    """A normal-form word; its word-metric length equals len(letters)."""

    letters: tuple[Letter, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    def key(self) -> tuple:
        return tuple(_letter_key(l) for l in self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        parts = []
        for gen, sign in self.letters:
            name = _NAMES[gen] if gen < len(_NAMES) else f"g{gen}"
            parts.append(name if sign > 0 else name + "^-1")
        return " ".join(parts)


IDENTITY = Word(())


def _validate_raw(group: GroupSpec, raw: Iterable[Letter]) -> list[Letter]:
    out = []
    for gen, sign in raw:
        if not 0 <= gen < group.rank:
            raise MalformedInputError(
                f"generator index {gen} out of range for rank {group.rank}"
            )
        if sign not in (1, -1):
            raise MalformedInputError(f"letter sign must be +1 or -1, got {sign}")
        out.append((gen, sign))
    return out


def reduce_word(group: GroupSpec, raw: Iterable[Letter]) -> Word:
    """Normal form of a raw letter sequence.

    Free groups cancel adjacent inverse pairs; free-abelian groups sum
    exponents per generator and write the result in generator order.
    """
    letters = _validate_raw(group, raw)
    if group.kind == FREE:
        stack: list[Letter] = []
        for let in letters:
            if stack and stack[-1][0] == let[0] and stack[-1][1] == -let[1]:
                stack.pop()
            else:
                stack.append(let)
        return Word(tuple(stack))
    exponents = [0] * group.rank
    for gen, sign in letters:
        exponents[gen] += sign
    out: list[Letter] = []
    for gen, exp in enumerate(exponents):
        sign = 1 if exp > 0 else -1
        out.extend([(gen, sign)] * abs(exp))
    return Word(tuple(out))


def word_inverse(group: GroupSpec, w: Word) -> Word:
    return reduce_word(group, [(g, -s) for g, s in reversed(w.letters)])


def word_concat(group: GroupSpec, w1: Word, w2: Word) -> Word:
    """Normal form of the product w1*w2 (w2 acts first under composition)."""
    return reduce_word(group, w1.letters + w2.letters)


@dataclass
class Ball:
    """All normal-form words of length <= radius, in canonical order.

    `parents[i]` / `letters[i]` say how element i extends a shorter element:
    applying `letters[i]` to the image of `elements[parents[i]]` gives the
    image of `elements[i]`. `level_offsets[k]` is the index of the first
    word of length k; there is one extra terminal offset.
    """

    group: GroupSpec
    radius: int
    elements: list[Word]
    parents: list[int]
    letters: list[Letter | None]
    level_offsets: list[int]
    _index: dict[tuple, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self._index:
            self._index = {w.letters: i for i, w in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def frontier(self) -> list[Word]:
        return self.elements[self.level_offsets[self.radius] :]

    def level_slice(self, k: int) -> slice:
        return slice(self.level_offsets[k], self.level_offsets[k + 1])

    def index_of(self, w: Word) -> int:
        return self._index[w.letters]

    def __contains__(self, w: Word) -> bool:
        return w.letters in self._index


def _abelian_jmax(w: Word) -> int:
    return w.letters[-1][0] if w.letters else -1


def ball(group: GroupSpec, n: int) -> Ball:
    """The word-metric ball of radius n."""
    if n < 0:
        raise MalformedInputError("ball radius must be non-negative")
    b = Ball(group, 0, [IDENTITY], [-1], [None], [0, 1])
    for _ in range(n):
        b = extend_frontier(b)
    return b


def extend_frontier(b: Ball) -> Ball:
    """Ball of radius n+1, built by one-letter extensions of the frontier."""
    group = b.group
    all_letters = [(g, s) for g in range(group.rank) for s in (1, -1)]
    lo, hi = b.level_offsets[b.radius], b.level_offsets[b.radius + 1]
    new_elements = list(b.elements)
    new_parents = list(b.parents)
    new_letters = list(b.letters)

    if group.kind == FREE:
        # Prepend letters so that child(x) = letter(parent(x)); iterating
        # letters outermost keeps each level lexicographically sorted.
        for let in all_letters:
            for pi in range(lo, hi):
                parent = b.elements[pi]
                if parent.letters and parent.letters[0] == (let[0], -let[1]):
                    continue
                new_elements.append(Word((let,) + parent.letters))
                new_parents.append(pi)
                new_letters.append(let)
    else:
        # Canonical form appends at the end; generators commute, so the
        # image of the child is still letter(parent image).
        for pi in range(lo, hi):
            parent = b.elements[pi]
            jmax = _abelian_jmax(parent)
            for let in all_letters:
                gen, sign = let
                if gen < jmax:
                    continue
                if gen == jmax and sign != parent.letters[-1][1]:
                    continue
                new_elements.append(Word(parent.letters + (let,)))
                new_parents.append(pi)
                new_letters.append(let)

    offsets = list(b.level_offsets) + [len(new_elements)]
    return Ball(group, b.radius + 1, new_elements, new_parents, new_letters, offsets)


def ball_size(group: GroupSpec, n: int) -> int:
    """|K_n| without enumerating (used for resource guards)."""
    if group.kind == FREE:
        q = 2 * group.rank - 1
        if q == 1:
            return 2 * n + 1
        return 1 + 2 * group.rank * (q**n - 1) // (q - 1)
    # lattice points with L1 norm <= n
    total = 0
    for k in range(min(group.rank, n) + 1):
        total += comb(group.rank, k) * 2**k * comb(n, k)
    return total
