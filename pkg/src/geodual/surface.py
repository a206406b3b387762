"""Triangulated surfaces as flag systems (F, alpha, beta, gamma).

alpha swaps the vertex of a flag, beta its edge, gamma its face.
Vertices, edges and faces are the orbits of <beta,gamma>, <alpha,gamma>
and <alpha,beta>.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from . import perm
from .errors import (
    BadEdgeCycle,
    BadFaceCycle,
    HasFixedPoint,
    NotInvolution,
    NotTransitive,
    ParseError,
)
from .perm import Permutation, compose

FORMAT_HEADER = "geodual-surface 1"


class StripKind(enum.Enum):
    UMBRELLA = "umbrella"
    GEODESIC = "geodesic"


@dataclass(frozen=True)
class FlagSurface:
    flag_count: int
    alpha: Permutation
    beta: Permutation
    gamma: Permutation

    @property
    def involutions(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.alpha, self.beta, self.gamma)

    def relabel(self, phi: Permutation) -> "FlagSurface":
        """Surface with flag x renamed to phi(x)."""
        inv = perm.inverse(phi)
        conj = lambda p: compose(phi, compose(p, inv))  # noqa: E731
        return FlagSurface(self.flag_count, conj(self.alpha), conj(self.beta), conj(self.gamma))


@dataclass(frozen=True)
class SurfaceStats:
    vertex_count: int
    edge_count: int
    face_count: int
    euler_characteristic: int
    orientable: bool
    vertex_degrees: tuple[int, ...]
    uniform_degree: int | None

    @property
    def orientable_genus(self) -> int | None:
        if not self.orientable:
            return None
        return (2 - self.euler_characteristic) // 2

    @property
    def crosscap_number(self) -> int | None:
        if self.orientable:
            return None
        return 2 - self.euler_characteristic


@dataclass(frozen=True)
class FlagIsomorphism:
    """mapping[x - 1] is the image of flag x."""

    mapping: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.mapping[x - 1]

    def as_permutation(self) -> Permutation:
        return Permutation(self.mapping)

    def inverse(self) -> "FlagIsomorphism":
        return FlagIsomorphism(perm.inverse(self.as_permutation()).image)


def _cycle_lengths_are(p: Permutation, k: int) -> int | None:
    """First point lying on a cycle of length != k, or None."""
    seen = [False] * (p.degree + 1)
    for start in range(1, p.degree + 1):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p(x)
            length += 1
        if length != k:
            return start
    return None


def validate(flag_count: int, alpha: Permutation, beta: Permutation, gamma: Permutation) -> FlagSurface:
    """Check the surface axioms and return the surface.

    The checks run in a fixed order (involution, fixed points, transitivity,
    face cycles, edge cycles) and the first failure is raised.
    """
    for name, p in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if p.degree != flag_count:
            raise ValueError(f"{name} has degree {p.degree}, expected {flag_count}")
    for name, p in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        for x in range(1, flag_count + 1):
            if p(p(x)) != x:
                raise NotInvolution(f"{name} is not an involution (flag {x})")
    for name, p in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        for x in range(1, flag_count + 1):
            if p(x) == x:
                raise HasFixedPoint(f"{name} fixes flag {x}")
    if len(perm.orbit(1, [alpha, beta, gamma])) != flag_count:
        raise NotTransitive("<alpha, beta, gamma> is not transitive on the flags")
    bad = _cycle_lengths_are(compose(alpha, beta), 3)
    if bad is not None:
        raise BadFaceCycle(f"alpha*beta has a cycle of length != 3 through flag {bad}")
    bad = _cycle_lengths_are(compose(alpha, gamma), 2)
    if bad is not None:
        raise BadEdgeCycle(f"alpha*gamma has a cycle of length != 2 through flag {bad}")
    return FlagSurface(flag_count, alpha, beta, gamma)


def vertices(s: FlagSurface) -> list[list[int]]:
    return perm.orbits([s.beta, s.gamma], s.flag_count)


def edges(s: FlagSurface) -> list[list[int]]:
    return perm.orbits([s.alpha, s.gamma], s.flag_count)


def faces(s: FlagSurface) -> list[list[int]]:
    return perm.orbits([s.alpha, s.beta], s.flag_count)


def face_index(s: FlagSurface) -> list[int]:
    """face_index[x] is the number (from 1) of the face containing flag x."""
    label = [0] * (s.flag_count + 1)
    for i, orb in enumerate(faces(s), 1):
        for x in orb:
            label[x] = i
    return label


def is_orientable(s: FlagSurface) -> bool:
    even = [compose(s.alpha, s.beta), compose(s.beta, s.gamma)]
    return len(perm.orbit(1, even)) < s.flag_count


def stats(s: FlagSurface) -> SurfaceStats:
    vs = vertices(s)
    v, e, f = len(vs), len(edges(s)), len(faces(s))
    degrees = tuple(sorted(len(orb) // 2 for orb in vs))
    uniform = degrees[0] if degrees and degrees[0] == degrees[-1] else None
    return SurfaceStats(
        vertex_count=v,
        edge_count=e,
        face_count=f,
        euler_characteristic=v - e + f,
        orientable=is_orientable(s),
        vertex_degrees=degrees,
        uniform_degree=uniform,
    )


def geodesic_dual(s: FlagSurface) -> FlagSurface:
    return FlagSurface(s.flag_count, s.alpha, s.beta, compose(s.alpha, s.gamma))


def strip_flags(s: FlagSurface, start: int, kind: StripKind) -> list[int]:
    """Flags visited by the umbrella (beta*gamma) or geodesic (beta*alpha*gamma) walk."""
    if kind is StripKind.UMBRELLA:
        step = compose(s.beta, s.gamma)
    else:
        step = compose(compose(s.beta, s.alpha), s.gamma)
    flags = [start]
    x = step(start)
    while x != start:
        flags.append(x)
        x = step(x)
    return flags


def face_strip(s: FlagSurface, start: int, kind: StripKind) -> list[int]:
    """Face numbers met along the umbrella or geodesic through ``start``."""
    label = face_index(s)
    return [label[x] for x in strip_flags(s, start, kind)]


def _extend(s: FlagSurface, t: FlagSurface, anchor: int) -> list[int] | None:
    n = s.flag_count
    src = [g.image for g in s.involutions]
    dst = [g.image for g in t.involutions]
    phi = [0] * (n + 1)
    used = [False] * (n + 1)
    phi[1] = anchor
    used[anchor] = True
    stack = [1]
    while stack:
        x = stack.pop()
        y = phi[x]
        for sp, tp in zip(src, dst):
            x2 = sp[x - 1]
            y2 = tp[y - 1]
            if phi[x2]:
                if phi[x2] != y2:
                    return None
            else:
                if used[y2]:
                    return None
                phi[x2] = y2
                used[y2] = True
                stack.append(x2)
    return phi[1:]


def find_isomorphism(s: FlagSurface, t: FlagSurface) -> FlagIsomorphism | None:
    """Flag bijection carrying the involutions of s onto those of t, or None.

    Transitivity pins the whole map once the image of flag 1 is chosen, so
    only ``flag_count`` anchors are tried, in ascending order.
    """
    if s.flag_count != t.flag_count:
        return None
    if _signature(s) != _signature(t):
        return None
    for anchor in range(1, t.flag_count + 1):
        phi = _extend(s, t, anchor)
        if phi is not None:
            return FlagIsomorphism(tuple(phi))
    return None


def _signature(s: FlagSurface) -> tuple:
    # cheap isomorphism invariant used to reject early
    bg = compose(s.beta, s.gamma)
    bag = compose(compose(s.beta, s.alpha), s.gamma)
    return (
        tuple(sorted(Counter(perm.cycle_lengths(bg)).items())),
        tuple(sorted(Counter(perm.cycle_lengths(bag)).items())),
        is_orientable(s),
    )


def is_isomorphism(s: FlagSurface, t: FlagSurface, phi: FlagIsomorphism) -> bool:
    for sp, tp in zip(s.involutions, t.involutions):
        for x in range(1, s.flag_count + 1):
            if phi(sp(x)) != tp(phi(x)):
                return False
    return True


def is_geodesic_self_dual(s: FlagSurface) -> tuple[bool, FlagIsomorphism | None]:
    phi = find_isomorphism(s, geodesic_dual(s))
    return phi is not None, phi


def serialize_surface(s: FlagSurface) -> str:
    lines = [
        FORMAT_HEADER,
        f"flags {s.flag_count}",
        f"alpha {perm.to_cycle_string(s.alpha)}",
        f"beta {perm.to_cycle_string(s.beta)}",
        f"gamma {perm.to_cycle_string(s.gamma)}",
    ]
    return "\n".join(lines) + "\n"


def parse_surface(text: str) -> FlagSurface:
    """Parse the line-based surface format; validation errors propagate unchanged."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line))
    if not rows:
        raise ParseError("empty surface file", 1)
    lineno, line = rows[0]
    if line != FORMAT_HEADER:
        raise ParseError(f"expected header {FORMAT_HEADER!r}", lineno)
    if len(rows) != 5:
        last = rows[-1][0]
        raise ParseError(f"expected 5 records, found {len(rows)}", last)
    lineno, line = rows[1]
    parts = line.split()
    if len(parts) != 2 or parts[0] != "flags" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError("expected 'flags <n>'", lineno)
    n = int(parts[1])
    gens = []
    for (lineno, line), name in zip(rows[2:], ("alpha", "beta", "gamma")):
        key, _, body = line.partition(" ")
        if key != name:
            raise ParseError(f"expected '{name} <cycles>'", lineno)
        try:
            gens.append(perm.parse_cycles(body.replace(" ", ""), n))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    return validate(n, *gens)


def read_surface(path) -> FlagSurface:
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


def write_surface(s: FlagSurface, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_surface(s))


def tetrahedron() -> FlagSurface:
    """The 24-flag barycentric subdivision of the tetrahedron."""
    n = 24
    alpha = perm.from_cycles([(2 * i + 1, 2 * i + 2) for i in range(12)], n)
    beta = perm.parse_cycles(
        "(1,6)(2,3)(4,5)(7,12)(8,9)(10,11)(13,18)(14,15)(16,17)(19,24)(20,21)(22,23)", n
    )
    gamma = perm.parse_cycles(
        "(1,22)(2,21)(3,8)(4,7)(5,18)(6,17)(9,20)(10,19)(11,14)(12,13)(15,24)(16,23)", n
    )
    return validate(n, alpha, beta, gamma)
