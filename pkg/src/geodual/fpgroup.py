"""Finitely presented groups, Todd-Coxeter coset enumeration and
Reidemeister-Schreier rewriting.

Words are tuples of signed generator numbers: ``i + 1`` stands for
generator ``i`` and ``-(i + 1)`` for its inverse. A word acts on cosets
from the left, so its last letter acts first.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import Incomplete, LimitExceeded, ParseError
from .perm import Permutation

Word = tuple


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def word_inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def word_power(word: Sequence[int], k: int) -> Word:
    if k < 0:
        return free_reduce(word_inverse(word) * -k)
    return free_reduce(tuple(word) * k)


@dataclass(frozen=True)
class GroupPresentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        n = len(self.generator_names)
        cleaned = []
        for r in self.relators:
            r = free_reduce(r)
            if not r:
                raise ValueError("relators must be nonempty after free reduction")
            for x in r:
                if x == 0 or abs(x) > n:
                    raise ValueError(f"letter {x} outside the generators")
            cleaned.append(r)
        object.__setattr__(self, "relators", tuple(cleaned))

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def format_word(self, word: Sequence[int]) -> str:
        return format_word(word, self.generator_names)

    def parse_word(self, text: str) -> Word:
        return parse_word(text, self.generator_names)

    def add_relators(self, extra: Sequence[Sequence[int]]) -> "GroupPresentation":
        return GroupPresentation(self.generator_names, self.relators + tuple(tuple(w) for w in extra))


def triangle_presentation(d: int) -> GroupPresentation:
    """<a, b, c | a^2, b^2, c^2, (ab)^3, (ac)^2, (bc)^d>."""
    if d < 1:
        raise ValueError("d must be at least 1")
    a, b, c = 1, 2, 3
    rels = [(a, a), (b, b), (c, c), (a, b) * 3, (a, c) * 2, (b, c) * d]
    return GroupPresentation(("a", "b", "c"), tuple(rels))


def geodesic_presentation(d: int) -> GroupPresentation:
    """The triangle group with the extra relator (bac)^d."""
    t = triangle_presentation(d)
    return t.add_relators([(2, 1, 3) * d])


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    out = []
    for x in word:
        name = names[abs(x) - 1]
        out.append(name if x > 0 else (name.upper() if len(name) == 1 and name.islower() else name + "^-1"))
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\^)\s*(-?\d+)|([A-Za-z])|(1))")


def parse_word(text: str, names: Sequence[str] = ("a", "b", "c")) -> Word:
    """Parse words such as ``c(bac)^4cb(bac)^4b`` or ``(cb)^2``.

    Lowercase letters are generators, uppercase letters their inverses;
    ``^k`` (k may be negative) repeats the preceding letter or group.
    """
    index = {name: i + 1 for i, name in enumerate(names)}
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse word at {text[pos:]!r}")
        pos = m.end()
        tokens.append(m)

    def group(i: int) -> tuple[list[int], int]:
        items: list[list[int]] = []
        while i < len(tokens):
            m = tokens[i]
            if m.group(1):
                inner, i = group(i + 1)
                if i >= len(tokens) or not tokens[i].group(2):
                    raise ParseError("unbalanced parentheses")
                items.append(inner)
                i += 1
            elif m.group(2):
                return [x for it in items for x in it], i
            elif m.group(3):
                if not items:
                    raise ParseError("'^' without a base")
                k = int(m.group(4))
                items[-1] = list(word_power(items[-1], k)) if k else []
                i += 1
            elif m.group(5):
                ch = m.group(5)
                if ch in index:
                    items.append([index[ch]])
                elif ch.lower() in index and ch.isupper():
                    items.append([-index[ch.lower()]])
                else:
                    raise ParseError(f"unknown generator {ch!r}")
                i += 1
            else:
                items.append([])
                i += 1
        return [x for it in items for x in it], i

    letters, i = group(0)
    if i != len(tokens):
        raise ParseError("unbalanced parentheses")
    return free_reduce(letters)


def _col(letter: int) -> int:
    # column of a signed letter: 2*i for generator i, 2*i + 1 for its inverse
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def _letter(col: int) -> int:
    return col // 2 + 1 if col % 2 == 0 else -(col // 2 + 1)


@dataclass
class CosetTable:
    """Left action of the generators on the cosets of a subgroup.

    Cosets are numbered from 0 and coset 0 is the subgroup itself.
    ``rows[c][_col(x)]`` is the coset ``x.c``. Complete tables are
    standardized: cosets appear in the order a row-by-row, column-by-column
    scan first meets them.
    """

    generator_count: int
    rows: list[list[int]]
    complete: bool = True
    defined: int = 0
    limit_reason: str | None = field(default=None, repr=False)

    @property
    def coset_count(self) -> int:
        return len(self.rows)

    def act(self, coset: int, letter: int) -> int:
        return self.rows[coset][_col(letter)]

    def trace(self, coset: int, word: Sequence[int]) -> int:
        if not self.complete:
            raise Incomplete("coset table is not complete")
        rows = self.rows
        for x in reversed(word):
            coset = rows[coset][_col(x)]
        return coset


def trace_word(t: CosetTable, coset: int, word: Sequence[int]) -> int:
    return t.trace(coset, word)


class _Enumerator:
    """HLT-style enumeration for right cosets, with coincidence handling.

    Internally ``table[c][col]`` is the right action c*x. Left cosets gU
    correspond to right cosets U g^-1, so the left action of x is read from
    the column of x^-1.
    """

    def __init__(self, ngens: int, budget: int):
        self.ncols = 2 * ngens
        self.budget = budget
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.defined = 1
        self.deductions: list[tuple[int, int]] | None = None

    def rep(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(self, c: int, col: int) -> None:
        if self.defined >= self.budget:
            raise LimitExceeded(f"coset budget {self.budget} exhausted", self.defined)
        n = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(n)
        self.defined += 1
        self.table[c][col] = n
        self.table[n][col ^ 1] = c
        if self.deductions is not None:
            self.deductions.append((c, col))

    def merge(self, k: int, l: int, queue: list[int]) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.parent[l] = k
        queue.append(l)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for col in range(self.ncols):
                f = row[col]
                if f < 0:
                    continue
                icol = col ^ 1
                if table[f][icol] == e:
                    table[f][icol] = -1
                e1 = self.rep(e)
                f1 = self.rep(f)
                if table[e1][col] >= 0:
                    self.merge(f1, table[e1][col], queue)
                elif table[f1][icol] >= 0:
                    self.merge(e1, table[f1][icol], queue)
                else:
                    table[e1][col] = f1
                    table[f1][icol] = e1
                    if self.deductions is not None:
                        self.deductions.append((e1, col))

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def scan_and_fill(self, c: int, cols: Sequence[int]) -> None:
        table = self.table
        n = len(cols)
        f = c
        i = 0
        b = c
        j = n - 1
        while True:
            while i <= j:
                nxt = table[f][cols[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i:
                nxt = table[b][cols[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][cols[i]] = b
                table[b][cols[i] ^ 1] = f
                if self.deductions is not None:
                    self.deductions.append((f, cols[i]))
                return
            self.define(f, cols[i])

    def run(self, relators: Sequence[Sequence[int]], subgroup: Sequence[Sequence[int]]) -> None:
        rel_cols = [[_col(x) for x in r] for r in relators]
        for w in subgroup:
            if w:
                self.scan_and_fill(0, [_col(x) for x in w])
        c = 0
        table = self.table
        while c < len(table):
            if self.live(c):
                for r in rel_cols:
                    self.scan_and_fill(c, r)
                    if not self.live(c):
                        break
                if self.live(c):
                    row = table[c]
                    for col in range(self.ncols):
                        if row[col] < 0:
                            self.define(c, col)
            c += 1

    def run_felsch(self, relators: Sequence[Sequence[int]], subgroup: Sequence[Sequence[int]]) -> None:
        """Felsch strategy: define the first open table entry, then close all
        consequences before defining again. Defines far fewer cosets than
        HLT on presentations with long relators."""
        self.deductions = []
        by_col: list[list[list[int]]] = [[] for _ in range(self.ncols)]
        seen = set()
        for r in relators:
            cols = [_col(x) for x in r]
            inv = [c ^ 1 for c in reversed(cols)]
            for w in (cols, inv):
                for i in range(len(w)):
                    rot = tuple(w[i:] + w[:i])
                    if rot not in seen:
                        seen.add(rot)
                        by_col[rot[0]].append(list(rot))
        for w in subgroup:
            if w:
                self.scan_and_fill(0, [_col(x) for x in w])
                self._process_deductions(by_col)
        table = self.table
        c = 0
        while c < len(table):
            col = 0
            while col < self.ncols and self.live(c):
                if table[c][col] < 0:
                    self.define(c, col)
                    self._process_deductions(by_col)
                col += 1
            c += 1

    def _process_deductions(self, by_col) -> None:
        stack = self.deductions
        table = self.table
        while stack:
            c, col = stack.pop()
            if not self.live(c):
                continue
            for w in by_col[col]:
                self.scan(c, w)
                if not self.live(c):
                    break
            d = table[c][col] if self.live(c) else -1
            if d >= 0 and self.live(d):
                for w in by_col[col ^ 1]:
                    self.scan(d, w)
                    if not self.live(d):
                        break

    def scan(self, c: int, cols: Sequence[int]) -> None:
        """Scan a relator at c without defining; record a deduction or a
        coincidence when the scan closes up."""
        table = self.table
        f = c
        i = 0
        j = len(cols) - 1
        while i <= j:
            nxt = table[f][cols[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        if i > j:
            if f != c:
                self.coincidence(f, c)
            return
        b = c
        while j >= i:
            nxt = table[b][cols[j] ^ 1]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif i == j:
            table[f][cols[i]] = b
            table[b][cols[i] ^ 1] = f
            self.deductions.append((f, cols[i]))

    def standardized_left_rows(self) -> list[list[int]]:
        """Live cosets renumbered in scan order; columns turned into the left action."""
        ncols = self.ncols
        table = self.table
        # left action of letter x is the right action of x^-1
        left_col = [col ^ 1 for col in range(ncols)]
        number = {0: 0}
        order = [0]
        k = 0
        while k < len(order):
            c = order[k]
            for col in range(ncols):
                d = self.rep(table[c][left_col[col]])
                if d not in number:
                    number[d] = len(order)
                    order.append(d)
            k += 1
        return [[number[self.rep(table[c][left_col[col]])] for col in range(ncols)] for c in order]


def coset_enumeration(
    pres: GroupPresentation,
    subgroup_gens: Sequence[Sequence[int]] = (),
    limit: int = 100_000,
    budget: int | None = None,
    strategy: str = "hlt",
) -> CosetTable:
    """Enumerate the cosets of <subgroup_gens> in the presented group.

    Returns a standardized complete table when the index is at most
    ``limit`` and the enumeration finishes within ``budget`` defined cosets
    (default ``10 * limit``). Otherwise the returned table has
    ``complete=False``: nothing is known about the index.

    ``strategy`` is ``"hlt"`` (relator-driven definitions) or ``"felsch"``
    (deduction-driven, economical on long relators). The standardized result
    does not depend on the strategy.
    """
    if strategy not in ("hlt", "felsch"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if budget is None:
        budget = 10 * limit
    for w in subgroup_gens:
        for x in w:
            if x == 0 or abs(x) > pres.generator_count:
                raise ValueError(f"letter {x} outside the generators")
    enum_ = _Enumerator(pres.generator_count, budget)
    try:
        runner = enum_.run if strategy == "hlt" else enum_.run_felsch
        runner(pres.relators, [free_reduce(w) for w in subgroup_gens])
    except LimitExceeded as exc:
        return CosetTable(pres.generator_count, [], complete=False, defined=enum_.defined, limit_reason=str(exc))
    rows = enum_.standardized_left_rows()
    if len(rows) > limit:
        return CosetTable(
            pres.generator_count,
            [],
            complete=False,
            defined=enum_.defined,
            limit_reason=f"index {len(rows)} exceeds limit {limit}",
        )
    return CosetTable(pres.generator_count, rows, complete=True, defined=enum_.defined)


def group_order(
    pres: GroupPresentation, limit: int = 100_000, budget: int | None = None, strategy: str = "hlt"
) -> int:
    """Order of a finite presented group; raises LimitExceeded otherwise."""
    t = coset_enumeration(pres, (), limit, budget, strategy)
    if not t.complete:
        raise LimitExceeded(t.limit_reason or "enumeration incomplete")
    return t.coset_count


def quotient_coset_table(
    pres: GroupPresentation,
    extra_relators: Sequence[Sequence[int]],
    limit: int = 100_000,
    budget: int | None = None,
    strategy: str = "hlt",
) -> CosetTable:
    """Regular table of the quotient by <<extra_relators>>.

    The same table is the coset table of the normal closure of the extra
    relators inside the original group.
    """
    return coset_enumeration(pres.add_relators(extra_relators), (), limit, budget, strategy)


def table_to_permutations(t: CosetTable) -> list[Permutation]:
    """One permutation of {1..cosets} per generator (coset i is point i + 1)."""
    if not t.complete:
        raise Incomplete("coset table is not complete")
    perms = []
    for g in range(t.generator_count):
        col = 2 * g
        perms.append(Permutation._trusted(tuple(row[col] + 1 for row in t.rows)))
    return perms


def schreier_tree(t: CosetTable) -> list[tuple[int, int] | None]:
    """BFS spanning tree of the coset graph from coset 0.

    Entry c is (parent, letter) with ``letter.parent == c``, or None for the
    root. Edges are tried in (generator, sign) order.
    """
    parent: list[tuple[int, int] | None] = [None] * t.coset_count
    seen = [False] * t.coset_count
    seen[0] = True
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for col in range(2 * t.generator_count):
            d = t.rows[c][col]
            if not seen[d]:
                seen[d] = True
                parent[d] = (c, _letter(col))
                queue.append(d)
    return parent


@dataclass(frozen=True)
class SchreierGenerators:
    """Labels (coset, generator) for the Schreier generators of a subgroup presentation."""

    labels: tuple[tuple[int, int], ...]


def subgroup_presentation(pres: GroupPresentation, t: CosetTable) -> GroupPresentation:
    """Reidemeister-Schreier presentation of the subgroup behind ``t``.

    One Schreier generator per table edge (coset c, generator x) outside
    the BFS spanning tree; relators are the rewrites of every relator at
    every coset. Generators named ``s<c>_<x>`` stay in the output even
    when no relator mentions them, since they are then free.
    """
    if not t.complete:
        raise Incomplete("coset table is not complete")
    tree = schreier_tree(t)
    tree_edges = set()
    for c, entry in enumerate(tree):
        if entry is None:
            continue
        p, x = entry
        # letter x carries p to c; store the edge in positive orientation
        if x > 0:
            tree_edges.add((p, x))
        else:
            tree_edges.add((c, -x))
    index: dict[tuple[int, int], int] = {}
    names = []
    for c in range(t.coset_count):
        for g in range(1, t.generator_count + 1):
            if (c, g) not in tree_edges:
                index[(c, g)] = len(names) + 1
                names.append(f"s{c}_{pres.generator_names[g - 1]}")
    rows = t.rows
    relators = set()
    for r in pres.relators:
        # the word acts from the left: walk it from its last letter
        for c in range(t.coset_count):
            cur = c
            out = []
            for x in reversed(r):
                if x > 0:
                    k = index.get((cur, x))
                    nxt = rows[cur][_col(x)]
                    if k:
                        out.append(k)
                else:
                    nxt = rows[cur][_col(x)]
                    k = index.get((nxt, -x))
                    if k:
                        out.append(-k)
                cur = nxt
            out.reverse()
            w = cyclic_reduce(out)
            if w:
                relators.add(_canonical_cyclic(w))
    return GroupPresentation(tuple(names), tuple(sorted(relators, key=lambda w: (len(w), w))))


def _canonical_cyclic(w: Word) -> Word:
    # smallest rotation of w or its inverse, so duplicate relators collapse
    best = None
    for cand in (w, word_inverse(w)):
        for i in range(len(cand)):
            rot = cand[i:] + cand[:i]
            if best is None or rot < best:
                best = rot
    return best
