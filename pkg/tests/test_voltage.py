from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodual.errors import LimitExceeded, NotPrime
from geodual.surface import StripKind, faces, find_isomorphism, stats, strip_flags, tetrahedron
from geodual.voltage import (
    IDENTITY,
    KLEIN_S,
    KLEIN_ST,
    KLEIN_T,
    CornerVoltageAssignment,
    VoltageGroupSpec,
    identity_assignment,
    lifted_cycle_length,
    materialize_lift,
    prop_assignment,
    single,
    validate_assignment,
    verify_lift,
)

TETRA = tetrahedron()


@pytest.fixture(scope="module")
def h5(classified):
    return classified(5).entries[0].surface


@pytest.fixture(scope="module")
def h6(classified):
    return classified(6).entries[0].surface


def face_walk(s, f):
    walk = [f]
    for step in (s.beta, s.alpha, s.beta, s.alpha, s.beta):
        walk.append(step(walk[-1]))
    return walk


@pytest.mark.parametrize(
    "p,pattern",
    [
        (3, (1, 2, 1, 2, 1, 2)),
        (5, (1, 4, 1, 4, 3, 2)),
        (2, (KLEIN_S, KLEIN_S, KLEIN_T, KLEIN_T, KLEIN_ST, KLEIN_ST)),
    ],
)
def test_prop_assignment_values(h5, p, pattern):
    va = prop_assignment(h5, p)
    for face, orb in enumerate(faces(h5), 1):
        f = min(orb)
        assert [va(x) for x in face_walk(h5, f)] == [single(face, v) for v in pattern]
    assert va.spec.kind == ("klein" if p == 2 else "cyclic")


def test_prop_assignment_rejects_non_primes():
    for p in (0, 1, 4, 9):
        with pytest.raises(NotPrime):
            prop_assignment(TETRA, p)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prop_assignment_is_valid(h5, h6, p):
    for s in (TETRA, h5, h6):
        assert validate_assignment(prop_assignment(s, p)).ok


def test_identity_assignment_is_valid():
    assert validate_assignment(identity_assignment(TETRA)).ok


def test_inverse_violation_reported():
    spec = VoltageGroupSpec.for_prime(3, range(1, 5))
    values = [IDENTITY] * 24
    f = 1
    values[f - 1] = single(1, 1)
    values[TETRA.beta(f) - 1] = single(1, 1)
    rep = validate_assignment(CornerVoltageAssignment(TETRA, spec, tuple(values)))
    assert f in rep.inverse_violations
    assert not rep.ok


def test_group_operations():
    spec = VoltageGroupSpec.for_prime(5, range(1, 4))
    g = ((1, 2), (3, 4))
    assert spec.multiply(g, spec.inverse(g)) == IDENTITY
    assert spec.multiply(g, g) == ((1, 4), (3, 3))
    klein = VoltageGroupSpec.for_prime(2, range(1, 3))
    assert klein.multiply(single(1, KLEIN_S), single(1, KLEIN_T)) == single(1, KLEIN_ST)
    assert klein.inverse(single(2, KLEIN_ST)) == single(2, KLEIN_ST)
    with pytest.raises(NotPrime):
        VoltageGroupSpec("cyclic", 2, (1,))


def test_lifted_cycle_examples(h5):
    assert lifted_cycle_length(prop_assignment(h5, 3), 1, StripKind.UMBRELLA) == 15
    assert lifted_cycle_length(prop_assignment(h5, 2), 1, StripKind.GEODESIC) == 10
    ident = identity_assignment(h5)
    assert lifted_cycle_length(ident, 1, StripKind.UMBRELLA) == 5
    assert lifted_cycle_length(ident, 1, StripKind.GEODESIC) == 5


@pytest.mark.parametrize("p", [2, 3, 5])
def test_verify_lift_all_lengths(h5, h6, p):
    for s, d in ((h5, 5), (h6, 6)):
        rep = verify_lift(prop_assignment(s, p))
        assert rep.all_match
        assert rep.multiset() == {d * p: 2 * s.flag_count}
        assert rep.render().endswith(f"all = {d * p}: yes\n")


def test_identity_lift_flags_mismatch(h5):
    rep = verify_lift(identity_assignment(h5), p=3)
    assert rep.multiset() == {5: 120}
    assert not rep.all_match
    assert rep.render().endswith("all = 15: no\n")


def _base_product(va, x, kind):
    # voltage accumulated along one turn of the base cycle through x
    s, spec = va.base, va.spec
    inner = s.gamma if kind is StripKind.UMBRELLA else (lambda y: s.alpha(s.gamma(y)))
    g = IDENTITY
    for y in strip_flags(s, x, kind):
        g = spec.multiply(va(inner(y)), g)
    return g


def _element_order(spec, g):
    k, h = 1, g
    while h != IDENTITY:
        h = spec.multiply(h, g)
        k += 1
    return k


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 60), st.sampled_from(list(StripKind)), st.data())
def test_lift_length_properties(p, x, kind, data):
    from geodual.classify import classify

    s = classify(5)[0].surface
    va = prop_assignment(s, p)
    n = lifted_cycle_length(va, x, kind)
    base = len(strip_flags(s, x, kind))
    assert n == base * _element_order(va.spec, _base_product(va, x, kind))
    # any starting voltage gives the same length
    comps = data.draw(st.lists(st.integers(1, 10), max_size=3, unique=True))
    vals = data.draw(st.lists(st.integers(1, va.spec.factor_order - 1), min_size=len(comps), max_size=len(comps)))
    start = tuple(sorted(zip(comps, vals)))
    assert lifted_cycle_length(va, x, kind, start) == n


def test_materialize_identity_lift_is_base():
    lifted = materialize_lift(identity_assignment(TETRA), 100)
    assert lifted.flag_count == 24
    assert find_isomorphism(lifted, TETRA) is not None


def test_materialize_h5_prime_three(h5):
    lifted = materialize_lift(prop_assignment(h5, 3), 10**6)
    st_ = stats(lifted)
    assert st_.uniform_degree == 15
    assert lifted.flag_count % 60 == 0
    geodesic_lengths = {len(strip_flags(lifted, x, StripKind.GEODESIC)) for x in range(1, lifted.flag_count + 1, 97)}
    assert geodesic_lengths == {15}


def test_materialize_limit(h5):
    with pytest.raises(LimitExceeded):
        materialize_lift(prop_assignment(h5, 2), 1000)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_materialized_tetrahedron_lifts_validate(p):
    lifted = materialize_lift(prop_assignment(TETRA, p), 10**6)
    assert stats(lifted).uniform_degree == 3 * p
