"""Classification of geodesic self-dual degree-d surfaces inside H_d.

A subgroup V of H_d gives the surface on the left cosets gV with a, b, c
acting by left multiplication. That surface is geodesic self-dual exactly
when V meets no conjugate of <a>, <c>, <ab>, <ac>, <bc> nontrivially and
V^# is conjugate to V, where # fixes a, b and sends c to ac.

Group elements are the cosets of the trivial subgroup, numbered by the
standardized coset table (the identity is 0). ``mul[g, h]`` is the id of
the product gh.
"""

from __future__ import annotations

import functools
import math
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import perm
from .errors import GeodualError, Inconclusive, LimitExceeded
from .fpgroup import (
    GroupPresentation,
    coset_enumeration,
    geodesic_presentation,
    group_order,
    parse_word,
    quotient_coset_table,
    schreier_tree,
    subgroup_presentation,
    triangle_presentation,
    word_power,
)
from .smith import AbelianInvariants, abelian_invariants
from .perm import Permutation
from .surface import FlagSurface, SurfaceStats, find_isomorphism, geodesic_dual, stats, validate

log = logging.getLogger(__name__)

A, B, C = 1, 2, 3
FORBIDDEN_WORDS = ("a", "c", "ab", "ac", "bc")
EXCLUDED_DEGREES = (3, 4, 7)
FINITE_DEGREES = range(1, 10)


@dataclass(frozen=True)
class SubgroupRecord:
    generator_elements: tuple[int, ...]
    element_set: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.element_set)

    @property
    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_set))


@dataclass
class GroupData:
    d: int
    presentation: GroupPresentation
    mul: np.ndarray
    inv: np.ndarray
    gen_ids: tuple[int, int, int]
    sharp_table: np.ndarray
    forbidden: frozenset[int]
    words: list[tuple[int, ...]] = field(repr=False)
    gen_perms: list[Permutation] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.inv)

    def product(self, g: int, h: int) -> int:
        return int(self.mul[g, h])

    def element_of(self, word: Sequence[int]) -> int:
        """Id of the group element spelled by a word over a, b, c."""
        g = 0
        for x in reversed(word):
            gen = self.gen_ids[abs(x) - 1]
            if x < 0:
                gen = int(self.inv[gen])
            g = int(self.mul[gen, g])
        return g

    def sharp(self, g: int) -> int:
        return int(self.sharp_table[g])

    @functools.cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        while (orders == 0).any():
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.mul[cur, ar]
            k += 1
        return orders

    @functools.cached_property
    def elements(self) -> perm.ElementSet:
        """The regular representation as an explicit permutation group."""
        return perm.closure(self.gen_perms, self.order)

    def conjugates(self, members: Sequence[int]) -> np.ndarray:
        """Array M with M[i, h] = h * members[i] * h^-1."""
        idx = np.asarray(sorted(members), dtype=np.int64)
        right = self.mul[idx][:, self.inv]  # v * h^-1 for every h
        return self.mul[np.arange(self.order)[None, :], right]

    def conjugacy_class(self, g: int) -> np.ndarray:
        return np.unique(self.conjugates([g])[0])


def realize_group(d: int, limit: int = 10_000, shuffle_seed: int | None = None) -> GroupData:
    """Regular representation of H_d, its geodesic automorphism and the
    forbidden elements.

    ``shuffle_seed`` relabels the elements by a random permutation; every
    classification result must be independent of it.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    pres = geodesic_presentation(d)
    table = coset_enumeration(pres, (), limit)
    if not table.complete:
        raise LimitExceeded(f"H_{d} did not enumerate within limit {limit}: {table.limit_reason}")
    n = table.coset_count
    cols = np.asarray(table.rows, dtype=np.int64)  # cols[c, _col(x)] = x.c
    left = {A: cols[:, 0], -A: cols[:, 1], B: cols[:, 2], -B: cols[:, 3], C: cols[:, 4], -C: cols[:, 5]}
    tree = schreier_tree(table)
    order = _bfs_order(tree)
    mul = np.empty((n, n), dtype=np.int32)
    mul[0] = np.arange(n)
    words: list[tuple[int, ...]] = [()] * n
    for c in order[1:]:
        p, x = tree[c]
        mul[c] = left[x][mul[p]]
        words[c] = (x,) + words[p]
    inv = np.argmax(mul == 0, axis=1)
    gen_ids = tuple(int(left[g][0]) for g in (A, B, C))

    def elem(word):
        g = 0
        for x in reversed(word):
            gx = gen_ids[abs(x) - 1]
            g = int(mul[gx if x > 0 else inv[gx], g])
        return g

    # the geodesic automorphism: a -> a, b -> b, c -> ac, extended along the tree
    images = {A: gen_ids[0], B: gen_ids[1], C: elem((A, C))}
    sharp = np.zeros(n, dtype=np.int64)
    for c in order[1:]:
        p, x = tree[c]
        img = images[abs(x)] if x > 0 else int(inv[images[abs(x)]])
        sharp[c] = mul[img, sharp[p]]

    forbidden: set[int] = set()
    ar = np.arange(n)
    for text in FORBIDDEN_WORDS:
        g = elem(parse_word(text))
        h = g
        while h != 0:
            forbidden.update(np.unique(mul[ar, mul[h][inv]]).tolist())
            h = int(mul[h, g])

    if shuffle_seed is not None:
        rng = np.random.default_rng(shuffle_seed)
        new = np.concatenate([[0], 1 + rng.permutation(n - 1)])  # old id -> new id
        old = np.argsort(new)
        mul = new[mul[old][:, old]]
        inv = new[inv[old]]
        sharp = new[sharp[old]]
        words = [words[i] for i in old]
        gen_ids = tuple(int(new[g]) for g in gen_ids)
        forbidden = {int(new[g]) for g in forbidden}
    gen_perms = [Permutation._trusted(tuple(int(v) + 1 for v in mul[g])) for g in gen_ids]
    return GroupData(
        d=d,
        presentation=pres,
        mul=mul,
        inv=inv,
        gen_ids=gen_ids,
        sharp_table=sharp,
        forbidden=frozenset(forbidden),
        words=words,
        gen_perms=gen_perms,
    )


def _bfs_order(tree) -> list[int]:
    children: dict[int, list[int]] = {}
    for c, entry in enumerate(tree):
        if entry is not None:
            children.setdefault(entry[0], []).append(c)
    order = [0]
    k = 0
    while k < len(order):
        order.extend(children.get(order[k], ()))
        k += 1
    return order


def closure_of(G: GroupData, gens: Sequence[int], avoid: frozenset[int] | None = None) -> frozenset[int] | None:
    """Subgroup generated by ``gens``; None as soon as it meets ``avoid``."""
    gens = [g for g in dict.fromkeys(gens) if g != 0]
    found = {0}
    queue = deque([0])
    mul = G.mul
    while queue:
        e = queue.popleft()
        for s in gens:
            h = int(mul[s, e])
            if h not in found:
                if avoid is not None and h in avoid:
                    return None
                found.add(h)
                queue.append(h)
    return frozenset(found)


def canonical_conjugate(G: GroupData, members: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically smallest sorted id sequence among the conjugates."""
    if len(members) == 1:
        return (0,)
    M = np.sort(G.conjugates(members), axis=0).T  # row h: sorted conjugate by h
    best = np.lexsort(M.T[::-1])[0]
    return tuple(int(x) for x in M[best])


def _record(G: GroupData, members, gens=()) -> SubgroupRecord:
    key = canonical_conjugate(G, sorted(members))
    if tuple(sorted(members)) != key:
        gens = ()
    if not gens:
        gens = _small_generating_set(G, key)
    return SubgroupRecord(tuple(gens), frozenset(key))


def _small_generating_set(G: GroupData, members) -> tuple[int, ...]:
    target = len(members)
    gens: list[int] = []
    current = frozenset([0])
    for g in sorted(members):
        if g not in current:
            gens.append(g)
            current = closure_of(G, gens)
            if len(current) == target:
                break
    return tuple(gens)


def admissible_cyclic_subgroups(G: GroupData) -> list[frozenset[int]]:
    """Cyclic subgroups avoiding every forbidden element (all of them, not up to conjugacy)."""
    seen = set()
    out = []
    forbidden = G.forbidden
    for g in range(1, G.order):
        if g in forbidden:
            continue
        cyc = closure_of(G, [g], forbidden)
        if cyc is not None and cyc not in seen:
            seen.add(cyc)
            out.append(cyc)
    return out


def admissible_subgroups(G: GroupData, order_cap: int | None = None) -> list[SubgroupRecord]:
    """One representative per conjugacy class of subgroups avoiding the
    forbidden elements, trivial subgroup included.

    Every subgroup is a maximal-subgroup-plus-one-element join, so joining
    class representatives with all admissible cyclic subgroups reaches every
    class. Joins that touch a forbidden element are dropped on the spot.
    """
    cyclic = admissible_cyclic_subgroups(G)
    trivial = frozenset([0])
    reps = {(0,): trivial}
    queue = deque([trivial])
    while queue:
        V = queue.popleft()
        for C_ in cyclic:
            if C_ <= V:
                continue
            gens = sorted(V) + sorted(C_)
            W = closure_of(G, gens, G.forbidden)
            if W is None or (order_cap is not None and len(W) > order_cap):
                continue
            key = canonical_conjugate(G, sorted(W))
            if key not in reps:
                reps[key] = frozenset(key)
                queue.append(frozenset(key))
    records = [_record(G, members) for members in reps.values()]
    records.sort(key=lambda r: (r.order, r.key))
    return records


def geodesic_image_subgroup(G: GroupData, V: SubgroupRecord) -> SubgroupRecord:
    members = frozenset(int(G.sharp_table[g]) for g in V.element_set)
    gens = tuple(int(G.sharp_table[g]) for g in V.generator_elements)
    return SubgroupRecord(gens, members)


def are_conjugate(G: GroupData, V: SubgroupRecord | frozenset, W: SubgroupRecord | frozenset) -> int | None:
    """First element g (in id order) with g W g^-1 == V, or None."""
    v = V.element_set if isinstance(V, SubgroupRecord) else frozenset(V)
    w = W.element_set if isinstance(W, SubgroupRecord) else frozenset(W)
    if len(v) != len(w):
        return None
    orders = G.element_orders
    if Counter(int(orders[x]) for x in v) != Counter(int(orders[x]) for x in w):
        return None
    target = np.asarray(sorted(v))
    M = np.sort(G.conjugates(sorted(w)), axis=0)
    hits = np.nonzero((M == target[:, None]).all(axis=0))[0]
    return int(hits[0]) if len(hits) else None


def is_normal(G: GroupData, V: SubgroupRecord) -> bool:
    M = G.conjugates(sorted(V.element_set))
    return set(np.unique(M).tolist()) == set(V.element_set)


def coset_labels(G: GroupData, members: frozenset[int]) -> np.ndarray:
    """label[g] = number (from 0) of the left coset gV, numbered by smallest element."""
    n = G.order
    label = np.full(n, -1, dtype=np.int64)
    idx = np.asarray(sorted(members), dtype=np.int64)
    k = 0
    for g in range(n):
        if label[g] < 0:
            label[G.mul[g, idx]] = k
            k += 1
    return label


def surface_from_subgroup(G: GroupData, V: SubgroupRecord | frozenset) -> FlagSurface:
    """Surface on the left cosets of V; flag i + 1 is coset number i."""
    members = V.element_set if isinstance(V, SubgroupRecord) else frozenset(V)
    label = coset_labels(G, members)
    k = int(label.max()) + 1
    rep = np.zeros(k, dtype=np.int64)
    rep[label[::-1]] = np.arange(G.order)[::-1]  # smallest element of each coset
    gens = []
    for g in G.gen_ids:
        image = label[G.mul[g, rep]] + 1
        gens.append(Permutation._trusted(tuple(int(x) for x in image)))
    return validate(k, *gens)


@dataclass(frozen=True)
class ClassificationEntry:
    d: int
    subgroup: SubgroupRecord
    index: int
    surface: FlagSurface = field(repr=False)
    surface_stats: SurfaceStats
    self_dual_witness: int
    flag_level_confirmed: bool
    normal: bool

    @property
    def order(self) -> int:
        return self.subgroup.order


@dataclass
class Classification:
    d: int
    entries: list[ClassificationEntry]
    rejected: list[SubgroupRecord]
    exhaustive: bool = True
    group: GroupData | None = field(default=None, repr=False)


def classify_full(d: int, order_cap: int | None = None, limit: int = 10_000, shuffle_seed: int | None = None) -> Classification:
    """Run the whole pipeline and keep the rejected admissible subgroups too."""
    if d < 3:
        raise ValueError("classification needs d >= 3")
    if d in EXCLUDED_DEGREES:
        return Classification(d, [], [])
    if d not in FINITE_DEGREES:
        raise LimitExceeded(f"H_{d} is infinite; use the partial search")
    G = realize_group(d, limit, shuffle_seed)
    entries = []
    rejected = []
    for V in admissible_subgroups(G, order_cap):
        W = geodesic_image_subgroup(G, V)
        g = are_conjugate(G, V, W)
        if g is None:
            rejected.append(V)
            continue
        S = surface_from_subgroup(G, V)
        st = stats(S)
        if st.uniform_degree != d:
            raise GeodualError(f"coset surface of a subgroup of order {V.order} is not of degree {d}")
        confirmed = find_isomorphism(S, geodesic_dual(S)) is not None
        entries.append(
            ClassificationEntry(
                d=d,
                subgroup=V,
                index=G.order // V.order,
                surface=S,
                surface_stats=st,
                self_dual_witness=g,
                flag_level_confirmed=confirmed,
                normal=is_normal(G, V),
            )
        )
    entries.sort(key=lambda e: (-e.index, e.subgroup.key))
    return Classification(d, entries, rejected, exhaustive=order_cap is None, group=G)


def classify(d: int, order_cap: int | None = None) -> list[ClassificationEntry]:
    """All geodesic self-dual degree-d surfaces, largest first (3 <= d <= 9)."""
    return classify_full(d, order_cap).entries


# Collapse checks


COLLAPSE_LEFT = "c(bac)^4cb(bac)^4b"
COLLAPSE_RIGHT = "(cb)^2"


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class CollapseReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [f"{c.name}\t{'pass' if c.passed else 'FAIL'}\t{c.detail}" for c in self.checks]
        return "\n".join(lines) + "\n"


def separating_cosets(pres: GroupPresentation, left: str, right: str, limit: int = 10_000) -> tuple[int, list[int]]:
    """Size of the regular table of ``pres`` and the cosets on which the two
    words act differently."""
    table = coset_enumeration(pres, (), limit)
    if not table.complete:
        raise LimitExceeded(table.limit_reason or "enumeration incomplete")
    u, v = parse_word(left), parse_word(right)
    bad = [c for c in range(table.coset_count) if table.trace(c, u) != table.trace(c, v)]
    return table.coset_count, bad


def verify_collapse_identity() -> CollapseReport:
    """H_3 and H_7 are trivial, and the word identity behind the collapse of
    H_4 holds in T_4 but not in T_5."""
    checks = []
    for d in (3, 7):
        n = group_order(geodesic_presentation(d), 10_000)
        checks.append(CheckResult(f"|H_{d}| = 1", n == 1, f"order {n}"))
    n, bad = separating_cosets(triangle_presentation(4), COLLAPSE_LEFT, COLLAPSE_RIGHT)
    checks.append(
        CheckResult(
            f"{COLLAPSE_LEFT} = {COLLAPSE_RIGHT} in T_4",
            not bad,
            f"agree on {n - len(bad)} of {n} cosets",
        )
    )
    n, bad = separating_cosets(triangle_presentation(5), COLLAPSE_LEFT, COLLAPSE_RIGHT)
    checks.append(
        CheckResult(
            f"{COLLAPSE_LEFT} != {COLLAPSE_RIGHT} in T_5",
            bool(bad),
            f"separated on {len(bad)} of {n} cosets" + (f", first {bad[0]}" if bad else ""),
        )
    )
    return CollapseReport(checks)


@dataclass
class UncollapsedReport:
    d: int
    k: int
    distinct: bool
    method: str  # "orders" or "abelian invariants"
    orders: tuple[int | None, int | None] = (None, None)
    kernel_index: int | None = None
    invariants: AbelianInvariants | None = None

    def __str__(self):
        verdict = "distinct" if self.distinct else "equal"
        if self.method == "orders":
            return f"{verdict} (orders {self.orders[0]} vs {self.orders[1]})"
        return f"{verdict} (abelian invariants)"


def _finite_order(d: int, limit: int, budget: int | None) -> int | None:
    try:
        return group_order(geodesic_presentation(d), limit, budget)
    except LimitExceeded:
        return None


def verify_uncollapsed(d: int, k: int, limit: int = 10_000, budget: int | None = None) -> UncollapsedReport:
    """Decide whether H_d differs from H_k.

    Orders are compared when both groups enumerate. Otherwise, for k dividing
    d, the kernel N of the natural map H_d -> H_k, the normal closure of
    (bc)^k and (bac)^k, is enumerated as a subgroup of H_d and its abelian
    invariants computed; N is trivial when H_d = H_k, so nontrivial
    invariants prove the groups distinct. A trivial abelianization proves
    nothing and raises Inconclusive, as does an exhausted budget.
    """
    if not 1 <= k < d:
        raise ValueError("need 1 <= k < d")
    nd = _finite_order(d, limit, budget)
    nk = _finite_order(k, limit, budget)
    if nd is not None and nk is not None:
        if nd != nk:
            return UncollapsedReport(d, k, True, "orders", (nd, nk))
        g = math.gcd(d, k)
        if g == k or _finite_order(g, limit, budget) == nd:
            # H_d and H_k both map onto H_g with every map a bijection
            return UncollapsedReport(d, k, False, "orders", (nd, nk))
        raise Inconclusive(f"|H_{d}| = |H_{k}| = {nd} but {k} does not divide {d}")
    if d % k:
        raise Inconclusive(f"H_{d} or H_{k} exceeds the limit and {k} does not divide {d}")
    pres = geodesic_presentation(d)
    kernel = [word_power(parse_word("bc"), k), word_power(parse_word("bac"), k)]
    table = quotient_coset_table(pres, kernel, limit, budget)
    if not table.complete:
        raise Inconclusive(f"kernel of H_{d} -> H_{k} did not enumerate: {table.limit_reason}")
    inv = abelian_invariants(subgroup_presentation(pres, table))
    if inv.is_trivial:
        raise Inconclusive(f"kernel of H_{d} -> H_{k} has trivial abelianization")
    return UncollapsedReport(d, k, True, "abelian invariants", (nd, nk), table.coset_count, inv)
