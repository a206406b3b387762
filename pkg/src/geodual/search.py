"""Bounded search for geodesic self-dual surfaces by gluing triangles.

Works for any degree, including those where H_d is infinite, but only up
to a cap on the number of flags, so the result is never a complete
classification.

Face i (from 0) owns the flags 6i+1 .. 6i+6. Writing them locally as
0..5, alpha = (0 1)(2 3)(4 5) and beta = (1 2)(3 4)(5 0); every pair of
(alpha, beta) with alpha*beta of order 3 looks like this up to relabeling.
gamma commutes with alpha, so it glues side {2s, 2s+1} of one face to a
side of another, straight or crossed. Faces are created in the order in
which the gluing reaches them, which makes every rooted surface appear
once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import perm
from .errors import LimitExceeded
from .surface import FlagSurface, SurfaceStats, find_isomorphism, geodesic_dual, stats, validate

log = logging.getLogger(__name__)

_ALPHA = (1, 0, 3, 2, 5, 4)
_BETA = (5, 2, 1, 4, 3, 0)


@dataclass(frozen=True)
class SearchEntry:
    d: int
    index: int
    surface: FlagSurface = field(repr=False)
    surface_stats: SurfaceStats
    self_dual_witness: int
    flag_level_confirmed: bool = True


@dataclass
class SearchResult:
    d: int
    flag_cap: int
    entries: list[SearchEntry]
    nodes: int


class _Found(Exception):
    pass


class _Glue:
    """Backtracking over gamma. Closed umbrellas must have length
    ``umbrella`` and closed geodesics length ``geodesic``; with
    ``exact=False`` any divisor is accepted instead."""

    def __init__(self, umbrella: int, geodesic: int, max_faces: int, node_limit: int, exact: bool = True, stop=None):
        self.bounds = {False: umbrella, True: geodesic}
        self.exact = exact
        self.stop = stop
        self.max_faces = max_faces
        self.node_limit = node_limit
        self.nodes = 0
        n = 6 * max_faces
        # 0-based flags; -1 marks an unglued gamma image
        self.alpha = [6 * (x // 6) + _ALPHA[x % 6] for x in range(n)]
        self.beta = [6 * (x // 6) + _BETA[x % 6] for x in range(n)]
        self.gamma = [-1] * n
        self.faces = 1
        self.found: list[list[int]] = []

    def _path_ok(self, x: int, geodesic: bool) -> bool:
        # the step is x -> beta(gamma(x)) or x -> beta(alpha(gamma(x)))
        a, b, g = self.alpha, self.beta, self.gamma
        d = self.bounds[geodesic]
        length = 0
        y = x
        while True:
            z = g[y]
            if z < 0:
                break
            y = b[a[z]] if geodesic else b[z]
            length += 1
            if y == x:
                return length == d if self.exact else d % length == 0
            if length >= d:
                return False
        # open path: extend backwards, inverse step is gamma*beta or gamma*alpha*beta
        y = x
        while True:
            z = a[b[y]] if geodesic else b[y]
            w = g[z]
            if w < 0:
                break
            y = w
            length += 1
            if length >= d:
                return False
        return True

    def _consistent(self, flags) -> bool:
        for x in flags:
            if not (self._path_ok(x, False) and self._path_ok(x, True)):
                return False
        return True

    def _glue(self, x: int, y: int) -> list[int]:
        a, g = self.alpha, self.gamma
        g[x], g[y] = y, x
        g[a[x]], g[a[y]] = a[y], a[x]
        return [x, y, a[x], a[y]]

    def _unglue(self, flags) -> None:
        for x in flags:
            self.gamma[x] = -1

    def run(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise LimitExceeded(f"search exceeded {self.node_limit} nodes", self.nodes)
        n = 6 * self.faces
        x = next((x for x in range(0, n, 2) if self.gamma[x] < 0), None)
        if x is None:
            gamma = self.gamma[:n]
            if self.stop is None:
                self.found.append(gamma)
            elif self.stop(gamma):
                self.found.append(gamma)
                raise _Found
            return
        # glue to an open side already present, either way round
        for s in range(x + 2, n, 2):
            if self.gamma[s] >= 0:
                continue
            for y in (s, s + 1):
                touched = self._glue(x, y)
                if self._consistent(touched):
                    self.run()
                self._unglue(touched)
        # or to a fresh face; its symmetries make one placement enough
        if self.faces < self.max_faces:
            y = 6 * self.faces
            self.faces += 1
            touched = self._glue(x, y)
            if self._consistent(touched):
                self.run()
            self._unglue(touched)
            self.faces -= 1


def _as_surface(gamma: list[int]) -> FlagSurface:
    n = len(gamma)
    alpha = perm.from_images([6 * (x // 6) + _ALPHA[x % 6] + 1 for x in range(n)])
    beta = perm.from_images([6 * (x // 6) + _BETA[x % 6] + 1 for x in range(n)])
    return validate(n, alpha, beta, perm.from_images([y + 1 for y in gamma]))


def search_self_dual(d: int, flag_cap: int, node_limit: int = 5_000_000) -> SearchResult:
    """Geodesic self-dual degree-d surfaces with at most ``flag_cap`` flags.

    Each surface is reported once up to isomorphism, largest first.
    """
    if d < 3:
        raise ValueError("degree must be at least 3")
    g = _Glue(d, d, flag_cap // 6, node_limit)
    if g.max_faces >= 1:
        g.run()
    kept: list[SearchEntry] = []
    for gamma in g.found:
        S = _as_surface(gamma)
        if any(e.index == S.flag_count and find_isomorphism(S, e.surface) for e in kept):
            continue
        phi = find_isomorphism(S, geodesic_dual(S))
        if phi is None:
            continue
        kept.append(SearchEntry(d, S.flag_count, S, stats(S), phi(1)))
    kept.sort(key=lambda e: (-e.index, e.surface_stats.vertex_count))
    log.info("degree %d, cap %d: %d nodes, %d surfaces", d, flag_cap, g.nodes, len(kept))
    return SearchResult(d, flag_cap, kept, g.nodes)


def find_surface(
    umbrella: int, geodesic: int, flag_cap: int, accept, node_limit: int = 5_000_000
) -> FlagSurface | None:
    """Smallest surface found (by number of faces) whose umbrella lengths
    divide ``umbrella``, whose geodesic lengths divide ``geodesic`` and
    which satisfies ``accept``; None when there is none up to ``flag_cap``.

    Such a surface is a permutation representation of the group
    <a, b, c | a^2, b^2, c^2, (ab)^3, (ac)^2, (bc)^umbrella, (bac)^geodesic>.
    """
    for faces in range(1, flag_cap // 6 + 1):
        g = _Glue(umbrella, geodesic, faces, node_limit, exact=False, stop=lambda gm: accept(_as_surface(gm)))
        try:
            g.run()
        except _Found:
            return _as_surface(g.found[-1])
    return None
