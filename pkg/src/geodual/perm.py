"""Permutations on {1..n}, orbits and bounded group closure.

Composition is a left action: ``compose(p, q)(x) == p(q(x))``.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegreeMismatch, LimitExceeded, ParseError


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..degree}, stored as its image sequence."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if n == 0:
            raise ValueError("degree must be positive")
        if sorted(self.image) != list(range(1, n + 1)):
            raise ValueError("image is not a bijection of 1..%d" % n)

    @classmethod
    def _trusted(cls, image: tuple[int, ...]) -> "Permutation":
        # skips the bijection check for images built by this module
        p = object.__new__(cls)
        object.__setattr__(p, "image", image)
        return p

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self):
        return f"Permutation({to_cycle_string(self)}, degree={self.degree})"

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.image, 1))


def identity(n: int) -> Permutation:
    return Permutation._trusted(tuple(range(1, n + 1)))


def from_images(images: Sequence[int]) -> Permutation:
    return Permutation(tuple(int(v) for v in images))


def from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Permutation:
    image = list(range(1, n + 1))
    seen = set()
    for cyc in cycles:
        for x in cyc:
            if not 1 <= x <= n:
                raise ValueError(f"point {x} outside 1..{n}")
            if x in seen:
                raise ValueError(f"point {x} appears twice")
            seen.add(x)
        for i, x in enumerate(cyc):
            image[x - 1] = cyc[(i + 1) % len(cyc)]
    return Permutation._trusted(tuple(image))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return the permutation x -> p(q(x))."""
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees {p.degree} and {q.degree} differ")
    pi = p.image
    return Permutation._trusted(tuple([pi[v - 1] for v in q.image]))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, v in enumerate(p.image, 1):
        inv[v - 1] = i
    return Permutation._trusted(tuple(inv))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        p, k = inverse(p), -k
    result = identity(p.degree)
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def cycle_decomposition(p: Permutation) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its smallest point, sorted by that point."""
    seen = [False] * (p.degree + 1)
    cycles = []
    for start in range(1, p.degree + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p(start)
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = p(x)
        if len(cyc) > 1:
            cycles.append(tuple(cyc))
    return cycles


def cycle_lengths(p: Permutation) -> list[int]:
    """Lengths of all cycles, fixed points included, in order of smallest point."""
    seen = [False] * (p.degree + 1)
    lengths = []
    for start in range(1, p.degree + 1):
        if seen[start]:
            continue
        k = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p(x)
            k += 1
        lengths.append(k)
    return lengths


def element_order(p: Permutation) -> int:
    return math.lcm(*cycle_lengths(p))


def orbit(start: int, gens: Sequence[Permutation]) -> frozenset[int]:
    if gens and not 1 <= start <= gens[0].degree:
        raise ValueError(f"start point {start} out of range")
    found = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g(x)
            if y not in found:
                found.add(y)
                stack.append(y)
    return frozenset(found)


def orbits(gens: Sequence[Permutation], n: int) -> list[list[int]]:
    """All orbits on {1..n}, each sorted, ordered by smallest point."""
    label = [0] * (n + 1)
    result = []
    for start in range(1, n + 1):
        if label[start]:
            continue
        label[start] = len(result) + 1
        members = [start]
        stack = [start]
        while stack:
            x = stack.pop()
            for g in gens:
                y = g(x)
                if not label[y]:
                    label[y] = label[start]
                    members.append(y)
                    stack.append(y)
        result.append(sorted(members))
    return result


def evaluate_word(word: Sequence[int], gens: Sequence[Permutation]) -> Permutation:
    """Product gens[w0] * gens[w1] * ... (left action: the last letter acts first)."""
    if not gens:
        raise ValueError("no generators")
    result = identity(gens[0].degree)
    for i in word:
        result = compose(result, gens[i])
    return result


@dataclass(frozen=True)
class ElementSet:
    """A finite permutation group with one shortest word per element."""

    degree: int
    elements: tuple[Permutation, ...]
    words: dict

    def __len__(self):
        return len(self.elements)

    def __contains__(self, p):
        return p in self.words

    def __iter__(self):
        return iter(self.elements)

    def word_of(self, p: Permutation) -> tuple[int, ...]:
        return self.words[p]


def closure(gens: Sequence[Permutation], limit: int) -> ElementSet:
    """Breadth-first closure of ``gens``.

    Every element gets the shortest, then lexicographically smallest, word
    over generator indices. Raises LimitExceeded once more than ``limit``
    elements have been found.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].degree
    for g in gens:
        if g.degree != n:
            raise DegreeMismatch("generators have different degrees")
    one = identity(n)
    words = {one: ()}
    order = [one]
    queue = deque([one])
    while queue:
        e = queue.popleft()
        w = words[e]
        for i, g in enumerate(gens):
            h = compose(e, g)
            if h not in words:
                words[h] = w + (i,)
                order.append(h)
                if len(order) > limit:
                    raise LimitExceeded(f"closure exceeds {limit} elements", len(order))
                queue.append(h)
    return ElementSet(n, tuple(order), words)


def to_cycle_string(p: Permutation) -> str:
    cycles = cycle_decomposition(p)
    if not cycles:
        return "()"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse cycle notation such as ``(1,2)(3,4)``; ``()`` is the identity."""
    text = text.strip()
    if not text:
        raise ParseError("empty cycle string")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(text):
        if m.start() != pos:
            raise ParseError(f"unexpected text {text[pos:m.start()]!r}")
        pos = m.end()
        body = m.group(1).strip()
        if not body:
            continue
        try:
            cycles.append([int(tok) for tok in body.split(",")])
        except ValueError:
            raise ParseError(f"bad cycle {m.group(0)!r}") from None
    if pos != len(text):
        raise ParseError(f"unexpected text {text[pos:]!r}")
    try:
        return from_cycles(cycles, n)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
