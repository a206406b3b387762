"""Smith normal form over Python integers and abelian invariants.

Relator matrices from Reidemeister-Schreier are large and sparse, so the
unit pivots are eliminated sparsely first and only the remaining core goes
through the dense Smith reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .fpgroup import GroupPresentation


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    def __str__(self):
        return f"torsion {list(self.torsion)} free_rank {self.free_rank}"

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            rt = a[t]
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    q = v // p
                    if q:
                        for row in a[t:]:
                            if row[t]:
                                row[j] -= q * row[t]
                    if rt[j]:
                        done = False
            if done:
                break
            # move the smallest remainder into the pivot position and repeat
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return _divisor_chain(diag)


def _divisor_chain(diag: list[int]) -> list[int]:
    # replace pairs (x, y) by (gcd, lcm) until every entry divides the next
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = math.gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] // g * d[j]
                    changed = True
        d.sort()
    return d


def _sparse_reduce(rows: list[dict[int, int]], ncols: int) -> tuple[list[dict[int, int]], int]:
    """Eliminate unit pivots. Returns the remaining rows and the number of
    columns (generators) eliminated."""
    col_rows: dict[int, set[int]] = {}
    for r, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    alive = [bool(row) for row in rows]
    removed_cols = 0
    # rows with a unit entry, visited shortest first
    progress = True
    while progress:
        progress = False
        order = sorted((len(rows[r]), r) for r in range(len(rows)) if alive[r])
        for _, r in order:
            if not alive[r]:
                continue
            row = rows[r]
            if not row:
                alive[r] = False
                continue
            pivot = None
            for c, v in row.items():
                if v in (1, -1):
                    if pivot is None or len(col_rows[c]) < len(col_rows[pivot]):
                        pivot = c
            if pivot is None:
                continue
            pv = row[pivot]
            # eliminate pivot column from every other row
            for r2 in list(col_rows[pivot]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[pivot] * pv  # pv is +-1 so pv^-1 == pv
                for c, v in row.items():
                    nv = row2.get(c, 0) - f * v
                    if nv:
                        if c not in row2:
                            col_rows[c].add(r2)
                        row2[c] = nv
                    elif c in row2:
                        del row2[c]
                        col_rows[c].discard(r2)
                if not row2:
                    alive[r2] = False
            for c in row:
                col_rows[c].discard(r)
            del col_rows[pivot]
            alive[r] = False
            removed_cols += 1
            progress = True
    return [rows[r] for r in range(len(rows)) if alive[r] and rows[r]], removed_cols


def relator_matrix(pres: GroupPresentation) -> list[list[int]]:
    """Exponent-sum matrix: one row per relator, one column per generator."""
    n = pres.generator_count
    out = []
    for r in pres.relators:
        row = [0] * n
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        out.append(row)
    return out


def abelian_invariants(pres: GroupPresentation) -> AbelianInvariants:
    n = pres.generator_count
    rows = []
    for r in pres.relators:
        row: dict[int, int] = {}
        for x in r:
            c = abs(x) - 1
            row[c] = row.get(c, 0) + (1 if x > 0 else -1)
            if not row[c]:
                del row[c]
        if row:
            rows.append(row)
    rest, removed = _sparse_reduce(rows, n)
    cols = sorted({c for row in rest for c in row})
    index = {c: i for i, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, row in enumerate(rest):
        for c, v in row.items():
            dense[i][index[c]] = v
    diag = smith_diagonal(dense) if dense else []
    rank = removed + len(diag)
    return AbelianInvariants(free_rank=n - rank, torsion=tuple(x for x in diag if x > 1))
