from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodual import perm
from geodual.errors import (
    BadEdgeCycle,
    BadFaceCycle,
    HasFixedPoint,
    NotInvolution,
    NotTransitive,
    ParseError,
)
from geodual.perm import compose
from geodual.surface import (
    StripKind,
    face_index,
    face_strip,
    find_isomorphism,
    geodesic_dual,
    is_geodesic_self_dual,
    is_isomorphism,
    is_orientable,
    parse_surface,
    serialize_surface,
    stats,
    strip_flags,
    tetrahedron,
    validate,
)

TETRA = tetrahedron()

TETRA_TEXT = """geodual-surface 1
flags 24
alpha (1,2)(3,4)(5,6)(7,8)(9,10)(11,12)(13,14)(15,16)(17,18)(19,20)(21,22)(23,24)
beta (1,6)(2,3)(4,5)(7,12)(8,9)(10,11)(13,18)(14,15)(16,17)(19,24)(20,21)(22,23)
gamma (1,22)(2,21)(3,8)(4,7)(5,18)(6,17)(9,20)(10,19)(11,14)(12,13)(15,24)(16,23)
"""


def relabelled(s, seed):
    import random

    rng = random.Random(seed)
    images = list(range(1, s.flag_count + 1))
    rng.shuffle(images)
    return s.relabel(perm.from_images(images))


def test_tetrahedron_stats():
    st_ = stats(TETRA)
    assert (st_.vertex_count, st_.edge_count, st_.face_count) == (4, 6, 4)
    assert st_.euler_characteristic == 2
    assert st_.orientable
    assert st_.uniform_degree == 3
    assert st_.orientable_genus == 0
    assert st_.crosscap_number is None


def test_tetrahedron_dual_is_projective_plane():
    st_ = stats(geodesic_dual(TETRA))
    assert (st_.vertex_count, st_.edge_count, st_.face_count) == (3, 6, 4)
    assert st_.euler_characteristic == 1
    assert not st_.orientable
    assert st_.crosscap_number == 1
    assert st_.orientable_genus is None
    assert find_isomorphism(TETRA, geodesic_dual(TETRA)) is None


def test_double_dual_is_identity():
    assert geodesic_dual(geodesic_dual(TETRA)) == TETRA


def test_strips_on_tetrahedron():
    assert strip_flags(TETRA, 1, StripKind.UMBRELLA) == [1, 23, 17]
    assert strip_flags(TETRA, 1, StripKind.GEODESIC) == [1, 20, 11, 18]
    labels = face_index(TETRA)
    assert face_strip(TETRA, 1, StripKind.UMBRELLA) == [labels[1], labels[23], labels[17]]
    assert len(set(face_strip(TETRA, 1, StripKind.UMBRELLA))) == 3


def test_validate_fixed_point():
    ident = perm.identity(6)
    with pytest.raises(HasFixedPoint):
        validate(6, ident, ident, ident)


def test_validate_not_involution():
    p = perm.from_cycles([(1, 2, 3, 4)], 4)
    with pytest.raises(NotInvolution) as exc:
        validate(4, p, p, p)
    assert exc.value.condition == "NotInvolution"


def test_validate_not_transitive():
    def shift(p):
        return perm.from_images(list(p.image) + [x + 24 for x in p.image])

    with pytest.raises(NotTransitive):
        validate(48, shift(TETRA.alpha), shift(TETRA.beta), shift(TETRA.gamma))


def test_validate_bad_cycles():
    a, b, g = TETRA.involutions
    with pytest.raises(BadFaceCycle):
        validate(24, a, g, b)
    # swapping beta and alpha keeps the faces but breaks the edge condition
    with pytest.raises(BadEdgeCycle):
        validate(24, b, a, g)


def test_parse_round_trip():
    assert parse_surface(TETRA_TEXT) == TETRA
    assert serialize_surface(TETRA) == TETRA_TEXT
    assert parse_surface(serialize_surface(geodesic_dual(TETRA))) == geodesic_dual(TETRA)


def test_parse_comments_and_blank_lines():
    text = "# tetrahedron\n\n" + TETRA_TEXT.replace("flags 24", "flags 24\n# comment")
    assert parse_surface(text) == TETRA


def test_parse_four_cycle_in_alpha():
    text = TETRA_TEXT.replace("alpha (1,2)(3,4)", "alpha (1,2,3,4)")
    with pytest.raises(NotInvolution):
        parse_surface(text)


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("nonsense\n", 1),
        (TETRA_TEXT.replace("flags 24", "flags x"), 2),
        (TETRA_TEXT.replace("beta (1,6)", "beta (1,6"), 4),
        (TETRA_TEXT.replace("gamma", "delta"), 5),
        (TETRA_TEXT + "extra\n", 6),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_surface(text)
    assert exc.value.line == line


def test_self_duality_small_cases(classified):
    assert is_geodesic_self_dual(TETRA) == (False, None)
    ok, phi = is_geodesic_self_dual(classified(5).entries[0].surface)
    assert ok and phi is not None
    torus = classified(6).entries[1].surface
    assert stats(torus).face_count == 6
    ok, phi = is_geodesic_self_dual(torus)
    assert ok and is_isomorphism(torus, geodesic_dual(torus), phi)


def test_dual_of_torus_has_degree_six(classified):
    for e in classified(6).entries:
        assert stats(geodesic_dual(e.surface)).uniform_degree == 6


def _base_surfaces():
    from geodual.classify import classify

    return [TETRA, geodesic_dual(TETRA)] + [e.surface for d in (5, 6) for e in classify(d)]


BASES = None


def bases():
    global BASES
    if BASES is None:
        BASES = _base_surfaces()
    return BASES


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 4))
def test_relabelling_properties(seed, which):
    s = bases()[which]
    r = relabelled(s, seed)
    validate(r.flag_count, *r.involutions)
    assert geodesic_dual(geodesic_dual(r)) == r
    st_r, st_s = stats(r), stats(s)
    assert st_r == st_s
    assert is_orientable(r) == is_orientable(s)
    phi = find_isomorphism(s, r)
    assert phi is not None and is_isomorphism(s, r, phi)
    back = find_isomorphism(r, s)
    assert back is not None and is_isomorphism(r, s, phi.inverse())
    if st_s.uniform_degree is not None:
        d = st_s.uniform_degree
        assert r.flag_count == 6 * st_r.face_count == 4 * st_r.edge_count == 2 * d * st_r.vertex_count


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_isomorphism_transitive(s1, s2):
    s = bases()[2]
    r1, r2 = relabelled(s, s1), relabelled(s, s2)
    p = find_isomorphism(s, r1)
    q = find_isomorphism(r1, r2)
    composed = perm.compose(q.as_permutation(), p.as_permutation())
    from geodual.surface import FlagIsomorphism

    assert is_isomorphism(s, r2, FlagIsomorphism(composed.image))


def test_geodesic_strips_match_dual_umbrellas():
    for s in bases():
        dual = geodesic_dual(s)
        for x in range(1, s.flag_count + 1):
            assert len(strip_flags(s, x, StripKind.GEODESIC)) == len(strip_flags(dual, x, StripKind.UMBRELLA))


def test_umbrellas_have_degree_length():
    for s in bases():
        d = stats(s).uniform_degree
        assert all(len(face_strip(s, x, StripKind.UMBRELLA)) == d for x in range(1, s.flag_count + 1))


def test_even_subgroup_has_two_orbits_when_orientable():
    for s in bases():
        even = [compose(s.alpha, s.beta), compose(s.beta, s.gamma)]
        n_orbits = len(perm.orbits(even, s.flag_count))
        assert n_orbits == (2 if is_orientable(s) else 1)
