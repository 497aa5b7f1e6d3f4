import random

import pytest
from hypothesis import assume, given, settings, strategies as st
from oracles import compare_with_box_oracle, hull3_vertices_edges, random_small_systems, random_supports

from tropism_forge.laurent import LaurentPolynomial, cyclic_system, illustrative_system, parse_polynomial
from tropism_forge.polytopes import (
    cyclic_shift,
    group_elements,
    initial_form,
    initial_form_system,
    initial_support,
    is_pretropism,
    nested_initial_form,
    newton_polytope,
    orbit_group,
    pretropism_cones,
)

U9 = (1, 1, -2, 1, 1, -2, 1, 1, -2)
V9 = (0, 1, -1, 0, 1, -1, 0, 1, -1)
XYZ = ["x", "y", "z"]


def xyz(text):
    return parse_polynomial(text, names=XYZ)


def test_binomial_segment():
    p = newton_polytope([(2, 1, 4, 3), (0, 0, 0, 0)])
    assert set(p.vertices) == {(2, 1, 4, 3), (0, 0, 0, 0)}
    assert len(p.edges) == 1


def test_constant_polytope():
    p = newton_polytope(LaurentPolynomial.constant(3, 1))
    assert p.vertices == ((0, 0, 0),) and p.edges == ()
    with pytest.raises(ValueError):
        newton_polytope(LaurentPolynomial(3, {}))
    with pytest.raises(ValueError):
        initial_support([(0, 1)], (0, 0))


def test_illustrative_polytopes_match_hull_oracle():
    for f in illustrative_system().polys:
        p = newton_polytope(f)
        vertices, edges = hull3_vertices_edges(f.support())
        assert set(p.vertices) == set(vertices)
        assert {frozenset((e.a, e.b)) for e in p.edges} == edges


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=4, max_size=9, unique=True))
def test_random_polytopes_match_hull_oracle(points):
    vertices, edges = hull3_vertices_edges(points)
    if len(vertices) < 4:
        return  # flat sets are not covered by the oracle
    p = newton_polytope(points)
    assert set(p.vertices) == set(vertices)
    assert {frozenset((e.a, e.b)) for e in p.edges} == edges


def test_initial_support_examples():
    assert initial_support([(2, 1, 4, 3), (0, 0, 0, 0)], (1, 0, 0, 0)) == {(0, 0, 0, 0)}
    pts = [(1, 0), (0, 1), (2, -1)]
    assert initial_support(pts, (1, 1)) == set(pts)
    f1 = illustrative_system().polys[0]
    assert initial_form(f1, (1, 0, 0)) == xyz("y*(y^2 + z^2 - 1)*(-0.5)")


def test_illustrative_initial_forms():
    f = illustrative_system()
    in_x = initial_form_system(f, [(1, 0, 0)])
    assert list(in_x.polys) == [
        xyz("y*(y^2 + z^2 - 1)*(-0.5)"),
        xyz("z*(y^2 + z^2 - 1)*(y - 0.5)"),
        xyz("y*z*(y^2 + z^2 - 1)*(z - 0.5)"),
    ]
    in_y = initial_form_system(f, [(0, 1, 0)])
    assert list(in_y.polys) == [
        xyz("-x^2*(x^2 + z^2 - 1)*(x - 0.5)"),
        xyz("(z - x^3)*(x^2 + z^2 - 1)*(-0.5)"),
        xyz("-x^2*(z - x^3)*(x^2 + z^2 - 1)*(z - 0.5)"),
    ]
    nested = initial_form_system(f, [(1, 0, 0), (0, 1, 0)])
    assert list(nested.polys) == [
        xyz("y*(z^2 - 1)*(-0.5)"),
        xyz("z*(z^2 - 1)*(-0.5)"),
        xyz("y*z*(z^2 - 1)*(z - 0.5)"),
    ]
    other = initial_form_system(f, [(0, 1, 0), (1, 0, 0)])
    # the factor z^2 - 1 is shared by both nestings
    for p in list(nested.polys) + list(other.polys):
        for z in (1, -1):
            assert p.evaluate([2, 3, z]) == 0
    assert initial_form_system(f, []).polys == f.polys


def test_cyclic9_nested_initial_system():
    f = cyclic_system(9)
    g = initial_form_system(f, [U9, V9])
    assert [len(p.terms) for p in g.polys] == [3, 3, 9, 3, 3, 9, 3, 3, 2]
    assert g.polys[0] == parse_polynomial("x2 + x5 + x8", nvars=9)
    assert g.polys[1] == parse_polynomial("x0*x8 + x2*x3 + x5*x6", nvars=9)
    assert g.polys[6] == parse_polynomial(
        "x0*x1*x2*x3*x4*x5*x8 + x0*x1*x2*x5*x6*x7*x8 + x2*x3*x4*x5*x6*x7*x8", nvars=9)
    assert g.polys[8] == f.polys[8]
    assert initial_form_system(f, [V9, U9]).polys == g.polys


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=2, max_size=6, unique=True),
       st.tuples(*[st.integers(-3, 3)] * 3), st.integers(1, 5))
def test_initial_support_scaling_invariance(points, v, k):
    assume(any(v))
    assert initial_support(points, v) == initial_support(points, tuple(k * x for x in v))


def test_nested_initial_form_is_idempotent():
    f = illustrative_system().polys[2]
    g = nested_initial_form(f, [(1, 0, 0)])
    assert nested_initial_form(g, [(1, 0, 0)]) == g


@pytest.fixture(scope="module")
def cyclic9_cones():
    return pretropism_cones(cyclic_system(9), 2)


def test_cyclic9_has_the_two_dimensional_cone(cyclic9_cones):
    recs = cyclic9_cones
    # the (u, v) cone is a face of several maximal cones
    hosts = [r for r in recs if r.cone.span_contains(U9) and r.cone.span_contains(V9)]
    assert any(r.cone.contains(U9) and r.cone.contains(V9) for r in hosts)
    for r in recs:
        assert all(len(c) >= 2 for c in r.certificates)


def test_binomial_system_cone_is_the_kernel():
    sups = [[(2, 1, 4, 3), (0, 0, 0, 0)], [(1, 1, 1, 1), (0, 0, 0, 0)]]
    (rec,) = pretropism_cones(sups, 2, positive_first=False)
    assert rec.dim == 2 and len(rec.cone.lineality) == 2
    for v in [(-3, 2, 1, 0), (-2, 1, 0, 1)]:
        assert rec.cone.contains(v) and rec.cone.contains(tuple(-x for x in v))


def test_illustrative_rays():
    recs = pretropism_cones(illustrative_system(), 1, positive_first=False)
    for v in [(1, 0, 0), (0, 1, 0)]:
        assert is_pretropism(illustrative_system(), v)
        assert any(r.cone.contains(v) for r in recs)


def test_positive_first_filter():
    f = illustrative_system()
    kept = pretropism_cones(f, 1)
    every = pretropism_cones(f, 1, positive_first=False)
    assert set(kept) <= set(every)
    for r in kept:
        assert any(g[0] > 0 for g in r.cone.generators())


@pytest.mark.parametrize("idx", range(12))
def test_pretropisms_match_box_oracle(idx):
    supports = random_small_systems(12, seed=77)[idx]
    recs = pretropism_cones(supports, 1, positive_first=False)
    assert compare_with_box_oracle(supports, recs) == []


def test_two_polynomials_in_three_variables_match_oracle():
    rng = random.Random(5)
    for _ in range(5):
        sups = random_supports(rng, 3, 2)
        assert compare_with_box_oracle(sups, pretropism_cones(sups, 1, positive_first=False)) == []


def test_cyclic_orbits():
    f = cyclic_system(5)
    recs = pretropism_cones(f, 1)
    orbits = orbit_group(recs, cyclic_shift(5))
    assert sum(len(o.members) for o in orbits) == len(recs)
    for o in orbits:
        assert 5 % o.size == 0
        for m in o.members:
            assert any(o.representative.cone.permuted(g) == m.cone for g in group_elements(cyclic_shift(5)))


def test_cyclic9_orbit_members_are_shifts(cyclic9_cones):
    orbits = orbit_group(cyclic9_cones, cyclic_shift(9))
    assert sum(len(o.members) for o in orbits) == len(cyclic9_cones)
    shifts = group_elements(cyclic_shift(9))
    for orb in orbits:
        assert 9 % orb.size == 0
        for m in orb.members:
            assert any(orb.representative.cone.permuted(g) == m.cone for g in shifts)


def test_identity_orbit():
    recs = pretropism_cones([[(1, 0), (0, 1)]], 1, positive_first=False)
    (orb,) = orbit_group(recs[:1], (0, 1))
    assert orb.size == 1
    with pytest.raises(ValueError):
        orbit_group(recs, (0, 0))
