"""Corner voltage assignments and their lifts.

A corner voltage assignment v maps flags into an abelian voltage group with
v(beta.x) = v(x)^-1. The lift acts on pairs (x, g):

    alpha^(x, g) = (alpha.x, g)
    beta^(x, g)  = (beta.x, v(x) g)
    gamma^(x, g) = (gamma.x, g)

The voltage groups used here are (Z/p)^F for odd p and (V4)^F for p = 2,
with one factor per face. Elements are stored sparsely as sorted tuples of
(face, value) pairs with nonzero value; V4 elements are bitmasks
(s = 1, t = 2, st = 3) multiplied by xor.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable

from . import perm
from .errors import LimitExceeded, NotPrime
from .perm import compose
from .surface import FlagSurface, StripKind, faces, validate

Element = tuple  # tuple of (face, value) pairs, sorted by face

IDENTITY: Element = ()

KLEIN_S, KLEIN_T, KLEIN_ST = 1, 2, 3


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class VoltageGroupSpec:
    """kind is ``"cyclic"`` ((Z/p)^F, p an odd prime), ``"klein"`` ((V4)^F)
    or ``"trivial"``; components are the face numbers."""

    kind: str
    p: int
    components: tuple[int, ...]

    def __post_init__(self):
        if self.kind == "cyclic" and not (is_prime(self.p) and self.p != 2):
            raise NotPrime(f"cyclic voltage factors need an odd prime, got {self.p}")
        if self.kind == "klein" and self.p != 2:
            raise ValueError("the Klein four factor belongs to p = 2")
        if self.kind not in ("cyclic", "klein", "trivial"):
            raise ValueError(f"unknown voltage group kind {self.kind!r}")

    @classmethod
    def for_prime(cls, p: int, components: Iterable[int]) -> "VoltageGroupSpec":
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        return cls("klein" if p == 2 else "cyclic", p, tuple(components))

    @property
    def factor_order(self) -> int:
        return {"cyclic": self.p, "klein": 4, "trivial": 1}[self.kind]

    def contains(self, g: Element) -> bool:
        comps = set(self.components)
        return all(f in comps and 0 < v < self.factor_order for f, v in g)

    def combine(self, u: int, v: int) -> int:
        if self.kind == "klein":
            return u ^ v
        return (u + v) % self.p

    def negate(self, v: int) -> int:
        if self.kind == "klein":
            return v
        return (-v) % self.p

    def multiply(self, g: Element, h: Element) -> Element:
        if not g:
            return h
        if not h:
            return g
        out = dict(g)
        for f, v in h:
            w = self.combine(out.get(f, 0), v)
            if w:
                out[f] = w
            else:
                out.pop(f, None)
        return tuple(sorted(out.items()))

    def inverse(self, g: Element) -> Element:
        return tuple((f, self.negate(v)) for f, v in g)


def single(face: int, value: int) -> Element:
    return ((face, value),) if value else IDENTITY


@dataclass(frozen=True)
class CornerVoltageAssignment:
    """values[x - 1] is the voltage of flag x."""

    base: FlagSurface
    spec: VoltageGroupSpec
    values: tuple[Element, ...] = field(repr=False)

    def __call__(self, x: int) -> Element:
        return self.values[x - 1]


def identity_assignment(base: FlagSurface, spec: VoltageGroupSpec | None = None) -> CornerVoltageAssignment:
    if spec is None:
        spec = VoltageGroupSpec("trivial", 1, ())
    return CornerVoltageAssignment(base, spec, (IDENTITY,) * base.flag_count)


def face_representatives(s: FlagSurface) -> list[int]:
    return [orb[0] for orb in faces(s)]


def prop_assignment(s: FlagSurface, p: int) -> CornerVoltageAssignment:
    """The six-value pattern on every face, in the face's own component.

    With f the smallest flag of a face the values on f, b.f, ab.f, bab.f,
    abab.f, babab.f are 1, p-1, 1, p-1, p-2, 2 for odd p and
    s, s, t, t, st, st for p = 2.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    reps = face_representatives(s)
    spec = VoltageGroupSpec.for_prime(p, range(1, len(reps) + 1))
    if p == 2:
        pattern = (KLEIN_S, KLEIN_S, KLEIN_T, KLEIN_T, KLEIN_ST, KLEIN_ST)
    else:
        pattern = (1, p - 1, 1, p - 1, p - 2, 2)
    values: list[Element] = [IDENTITY] * s.flag_count
    a, b = s.alpha, s.beta
    for face, f in enumerate(reps, 1):
        walk = [f]
        for step in (b, a, b, a, b):
            walk.append(step(walk[-1]))
        for x, v in zip(walk, pattern):
            values[x - 1] = single(face, v)
    return CornerVoltageAssignment(s, spec, tuple(values))


@dataclass
class AssignmentReport:
    inverse_violations: list[int]
    triangle_violations: list[int]

    @property
    def ok(self) -> bool:
        return not self.inverse_violations and not self.triangle_violations


def validate_assignment(va: CornerVoltageAssignment) -> AssignmentReport:
    """Check v(beta.x) = v(x)^-1 and v(beta alpha.x) v(alpha beta.x) v(x) = 1 at every flag."""
    s, spec = va.base, va.spec
    a, b = s.alpha, s.beta
    inv_bad, tri_bad = [], []
    for x in range(1, s.flag_count + 1):
        if va(b(x)) != spec.inverse(va(x)):
            inv_bad.append(x)
        prod = spec.multiply(spec.multiply(va(b(a(x))), va(a(b(x)))), va(x))
        if prod != IDENTITY:
            tri_bad.append(x)
    return AssignmentReport(inv_bad, tri_bad)


def _lift_step(va: CornerVoltageAssignment, kind: StripKind):
    s, spec = va.base, va.spec
    if kind is StripKind.UMBRELLA:
        inner = s.gamma
    else:
        inner = compose(s.alpha, s.gamma)
    beta = s.beta

    def step(x: int, g: Element) -> tuple[int, Element]:
        y = inner(x)  # alpha and gamma do not touch the voltage
        return beta(y), spec.multiply(va(y), g)

    return step


def lifted_cycle_length(va: CornerVoltageAssignment, start_flag: int, kind: StripKind, start: Element = IDENTITY) -> int:
    """Length of the cycle of beta^gamma^ (umbrella) or beta^alpha^gamma^
    (geodesic) through (start_flag, start), found by walking it."""
    step = _lift_step(va, kind)
    x, g = step(start_flag, start)
    k = 1
    while (x, g) != (start_flag, start):
        x, g = step(x, g)
        k += 1
    return k


@dataclass
class LiftReport:
    degree: int | None
    p: int
    lengths: list[tuple[int, StripKind, int]]

    @property
    def expected(self) -> int | None:
        return None if self.degree is None else self.degree * self.p

    @property
    def all_match(self) -> bool:
        return self.expected is not None and all(n == self.expected for _, _, n in self.lengths)

    def multiset(self) -> dict[int, int]:
        return dict(sorted(Counter(n for _, _, n in self.lengths).items()))

    def render(self) -> str:
        lines = [f"{x}\t{kind.value}\t{n}" for x, kind, n in self.lengths]
        lines.append(f"lengths {' '.join(f'{k}x{v}' for k, v in self.multiset().items())}")
        expected = "?" if self.expected is None else str(self.expected)
        lines.append(f"all = {expected}: {'yes' if self.all_match else 'no'}")
        return "\n".join(lines) + "\n"


def verify_lift(va: CornerVoltageAssignment, p: int | None = None) -> LiftReport:
    """Walk both lifted cycles from every base flag and compare with d*p.

    ``p`` defaults to the voltage group's prime (1 for trivial voltages).
    """
    from .surface import stats

    d = stats(va.base).uniform_degree
    if p is None:
        p = va.spec.p
    lengths = []
    for x in range(1, va.base.flag_count + 1):
        for kind in (StripKind.UMBRELLA, StripKind.GEODESIC):
            lengths.append((x, kind, lifted_cycle_length(va, x, kind)))
    return LiftReport(d, p, lengths)


def materialize_lift(va: CornerVoltageAssignment, flag_limit: int) -> FlagSurface:
    """The orbit of (1, identity) in the lift, flags numbered in BFS order."""
    s, spec = va.base, va.spec
    a, b, c = s.alpha, s.beta, s.gamma
    start = (1, IDENTITY)
    number = {start: 1}
    order = [start]
    queue = deque([start])
    edges: list[tuple[int, int, int]] = []
    while queue:
        x, g = queue.popleft()
        images = ((a(x), g), (b(x), spec.multiply(va(x), g)), (c(x), g))
        row = []
        for img in images:
            k = number.get(img)
            if k is None:
                if len(order) >= flag_limit:
                    raise LimitExceeded(f"lift orbit exceeds {flag_limit} flags", len(order) + 1)
                k = len(order) + 1
                number[img] = k
                order.append(img)
                queue.append(img)
            row.append(k)
        edges.append(tuple(row))
    n = len(order)
    gens = [perm.Permutation._trusted(tuple(row[i] for row in edges)) for i in range(3)]
    return validate(n, *gens)
