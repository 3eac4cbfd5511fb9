"""Permutations of tuple positions and shortest {p, s} words for them.

Positions are 0-based.  A permutation ``sigma`` acts on a tuple by
``sigma.apply(t)[i] == t[sigma(i)]``, so ``sigma.apply((w0, ..., wk))`` is
``(w_sigma(0), ..., w_sigma(k))``.  Products read like term prefixes:
``(a * b).apply(t) == a.apply(b.apply(t))``, i.e. ``a * b`` is ``a`` applied
after ``b``, exactly as in the term ``a(b(R))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on positions: {images}")

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def apply(self, t: Sequence) -> tuple:
        if len(t) != self.k:
            raise ValueError(f"tuple of length {len(t)} for permutation on {self.k} positions")
        return tuple(t[i] for i in self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.k != self.k:
            raise ValueError("cannot compose permutations of different sizes")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.k
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.images)) + ")"

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(k)))

    @classmethod
    def cyclic(cls, k: int) -> "Permutation":
        """The ``p`` operator: ``(a1, ..., ak) -> (ak, a1, ..., a(k-1))``."""
        if k < 2:
            raise ValueError("arity must be at least 2")
        return cls((k - 1,) + tuple(range(k - 1)))

    @classmethod
    def swap(cls, k: int) -> "Permutation":
        """The ``s`` operator: exchanges the last two positions."""
        if k < 2:
            raise ValueError("arity must be at least 2")
        return cls(tuple(range(k - 2)) + (k - 1, k - 2))


def generator(letter: str, k: int) -> Permutation:
    if letter == "p":
        return Permutation.cyclic(k)
    if letter == "s":
        return Permutation.swap(k)
    raise ValueError(f"unknown generator {letter!r}")


def word_permutation(word: str, k: int) -> Permutation:
    """Permutation denoted by the prefix ``word`` (``"ps"`` is ``p(s(R))``)."""
    perm = Permutation.identity(k)
    for letter in word:
        perm = perm * generator(letter, k)
    return perm


def all_permutations(k: int) -> list[Permutation]:
    """All of S_k in one-line (lexicographic) order."""
    return [Permutation(p) for p in permutations(range(k))]


@lru_cache(maxsize=None)
def _word_table(k: int) -> dict[Permutation, str]:
    # BFS extending words on the right, trying p before s: the first word to
    # reach an element is the shortlex-least word for it.
    start = Permutation.identity(k)
    gens = [("p", Permutation.cyclic(k)), ("s", Permutation.swap(k))]
    table = {start: ""}
    queue = deque([start])
    while queue:
        perm = queue.popleft()
        word = table[perm]
        for letter, g in gens:
            nxt = perm * g
            if nxt not in table:
                table[nxt] = word + letter
                queue.append(nxt)
    return table


def generator_word(perm: Permutation) -> str:
    """Shortest word over ``p``/``s`` denoting ``perm``; ties go to the lexicographically least."""
    if perm.k < 2:
        raise ValueError("generator words need k >= 2")
    return _word_table(perm.k)[perm]
