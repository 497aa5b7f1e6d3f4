import pytest

from tropism_forge.cyclotomic import Cyclotomic
from tropism_forge.laurent import cyclic_system
from tropism_forge.surfaces import (
    MonomialParametrization,
    ParametrizationError,
    backelin_s_change,
    backelin_s_form,
    backelin_set,
    degree_binomial_system,
    degree_of_parametrization,
    lattice_index,
    normalized_volume,
    orbit_expansion,
    origin_in_closure,
    unimodular_relation,
)
from test_linalg import cofactor_det

P = MonomialParametrization
U16 = (1, 1, 1, -3) * 4
V16 = (0, 1, 1, -2) * 4
W16 = (0, 0, 1, -1) * 4


def cyclic9_leading_term():
    u = Cyclotomic.root(1, 3)
    one = Cyclotomic.rational(1)
    coefs = [one, one, u**2, u, u, one, u**2, u**2, u]
    return P(tuple(coefs), ((1, 0), (1, 1), (-2, -1)) * 3)


def prop_matrix(m):
    """Exponent matrix of the binomial system for the m^2 family, as displayed."""
    first = [-m] + [-m + k for k in range(2, m)]
    rows = [first]
    for i in range(1, m - 1):
        rows.append([0] + [1 if j <= i else 0 for j in range(1, m - 1)])
    return rows


def test_backelin_m2():
    p = backelin_set(2)
    assert p.exponents == ((1,), (-1,), (1,), (-1,))
    assert [c.simplify() for c in p.coefficients] == [1, 1, -1, -1]
    assert p.satisfies(cyclic_system(4))


def test_backelin_m4_exponents_are_the_cyclic16_directions():
    E = backelin_set(4).exponent_matrix()
    assert [tuple(r) for r in E] == [U16, V16, W16]


@pytest.mark.parametrize("m", [2, 3, 4])
def test_backelin_sets_satisfy_cyclic(m):
    assert backelin_set(m).satisfies(cyclic_system(m * m))
    assert backelin_s_form(m).satisfies(cyclic_system(m * m))


def test_wrong_coefficients_fail():
    p = backelin_set(3)
    assert not P((1,) * 9, p.exponents).satisfies(cyclic_system(9))


def test_cyclic9_leading_term_lies_in_the_orbit():
    p = cyclic9_leading_term()
    assert p.satisfies(cyclic_system(9))
    orbit = orbit_expansion(backelin_set(3), 3)
    assert len(orbit) == 6
    assert any(q.same_set(p) for q in orbit)
    assert degree_of_parametrization(p) == 3
    assert len(orbit_expansion(p, 3)) == 6


def test_orbit_members_are_distinct_solution_sets():
    orbit = orbit_expansion(backelin_set(3))
    keys = {q.set_key() for q in orbit}
    assert len(keys) == len(orbit)
    assert all(q.satisfies(cyclic_system(9)) for q in orbit)
    assert orbit_expansion(backelin_set(3), patterns="identity") == [backelin_set(3)]


@pytest.mark.xfail(strict=True, reason="cyclic 4-roots has only two one-dimensional components")
def test_orbit_of_m2_has_2m_members():
    assert len(orbit_expansion(backelin_set(2), 2)) == 4


def test_orbit_of_m2_has_two_members():
    orbit = orbit_expansion(backelin_set(2), 2)
    assert len(orbit) == 2
    assert all(q.satisfies(cyclic_system(4)) for q in orbit)
    # the other curve of cyclic 4-roots: x = (t, -1/t, -t, 1/t)
    other = P((1, -1, -1, 1), ((1,), (-1,), (1,), (-1,)))
    assert other.satisfies(cyclic_system(4))
    assert any(q.same_set(other) for q in orbit)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_orbit_of_the_family_has_2m_members(m):
    assert len(orbit_expansion(backelin_set(m), m)) == 2 * m


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_degree_equals_m(m):
    p = backelin_set(m)
    assert {degree_of_parametrization(p, seed) for seed in range(5)} == {m}
    assert abs(cofactor_det(prop_matrix(m))) == m


def test_degree_binomial_system_shape():
    A, c = degree_binomial_system(backelin_set(3), seed=1)
    assert abs(cofactor_det(A.tolist())) == 3
    assert all(x != 0 for x in c)


def test_s_form_is_a_unimodular_reparametrization():
    for m in (2, 3, 4, 5):
        T = backelin_s_change(m)
        q = backelin_set(m).reparametrized(T)
        assert q == backelin_s_form(m)
        assert unimodular_relation(backelin_set(m), backelin_s_form(m)) == T
        assert degree_of_parametrization(backelin_s_form(m)) == m


def test_unimodular_relation_rejects_mismatches():
    assert unimodular_relation(backelin_set(3), backelin_set(3).conjugate()) is None
    doubled = backelin_set(3).reparametrized([[2, 0], [0, 1]])
    assert unimodular_relation(backelin_set(3), doubled) is None


@pytest.mark.parametrize("exps, want", [
    (((1,),), 1),
    (((2,), (4,)), 2),
    (((2,), (3,)), 3),
    (((1, 0), (0, 1), (1, 1)), 2),
    (((1, 0), (0, 1)), 1),
    (((1, 0), (0, 1), (2, 3)), 5),
])
def test_degrees_of_small_monomial_sets(exps, want):
    # (t^2, t^3) is the cuspidal cubic, (t^2, t^4) the parabola y = x^2,
    # (s, t, s^2 t^3) the quintic hypersurface z = x^2 y^3
    p = P((1,) * len(exps), exps)
    assert degree_of_parametrization(p) == want


def test_lattice_index():
    assert lattice_index(P((1, 1), ((2,), (4,)))) == 2
    assert lattice_index(P((1, 1), ((2,), (3,)))) == 1
    assert lattice_index(backelin_set(3)) == 1


def test_origin_in_closure():
    assert origin_in_closure(P((1, 1), ((2,), (3,))))
    assert not origin_in_closure(backelin_set(3))
    assert not origin_in_closure(P((1, 1), ((0,), (1,))))
    with pytest.raises(ParametrizationError):
        degree_binomial_system(P((1, 1), ((1,), (2,))))


def test_normalized_volume():
    assert normalized_volume([(0, 0), (1, 0), (0, 1), (1, 1)]) == 2
    assert normalized_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1
    cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    assert normalized_volume(cube) == 6
    assert normalized_volume([(0,), (5,), (2,)]) == 5


def test_degenerate_parametrizations():
    with pytest.raises(ParametrizationError):
        degree_of_parametrization(P((1, 1), ((1, 1), (2, 2))))
    with pytest.raises(ParametrizationError):
        P((1, 0), ((1,), (2,)))
    with pytest.raises(ParametrizationError):
        P((1,), ((1,), (2,)))
    with pytest.raises(ParametrizationError):
        P((1, 1), ((1,), (2, 0)))
    with pytest.raises(ParametrizationError):
        backelin_set(1)
    with pytest.raises(ParametrizationError):
        orbit_expansion(backelin_set(3), 4)


def test_json_and_text():
    p = cyclic9_leading_term()
    data = p.to_json()
    assert data["root_order"] == 3 and data["exact"]
    assert data["tropisms"][0] == ["1", "1", "-2"] * 3
    text = str(backelin_set(2))
    assert text.splitlines()[0] == "x0 = t0" and "x1 = t0^-1" in text
