import pytest

from tropism_forge.cyclotomic import Cyclotomic, CyclotomicDomain
from tropism_forge.initial_solver import (
    GridTooLarge,
    InitialSolverError,
    SolutionPoint,
    SolverConfig,
    roots_of_unity_point,
    solve_initial_form,
    verify_point,
)
from tropism_forge.laurent import cyclic_system, parse_system
from tropism_forge.linalg import Matrix, transform_from_tropisms
from tropism_forge.polytopes import initial_form_system
from tropism_forge.puiseux import reduce_initial_system

U9 = (1, 1, -2, 1, 1, -2, 1, 1, -2)
V9 = (0, 1, -1, 0, 1, -1, 0, 1, -1)


@pytest.fixture(scope="module")
def reduced9():
    f = cyclic_system(9)
    return reduce_initial_system(initial_form_system(f, [U9, V9]), transform_from_tropisms(Matrix([U9, V9])))


def substitute_known_point(system, coords):
    return all(r == 0 for r in verify_point(system, coords).values)


def test_reduced_cyclic9_has_seven_unknowns(reduced9):
    assert reduced9.nvars == 7 and len(reduced9.polys) == 9


def test_cyclic9_grid_contains_the_cubic_point(reduced9):
    u = Cyclotomic.root(1, 3)
    target = (u**2, u, u, Cyclotomic.rational(1), u**2, u**2, u)
    # independent check: plain substitution into the reduced system
    assert substitute_known_point(reduced9, target)
    sols = solve_initial_form(reduced9, SolverConfig(backend="grid", root_order=3))
    assert tuple(x.simplify() for x in target) in [s.coordinates for s in sols]
    # every returned point verifies exactly
    assert all(verify_point(reduced9, s).ok for s in sols)


def test_single_term_equation_is_rejected():
    f = parse_system("x0*x1; x0 - x1;")
    with pytest.raises(InitialSolverError):
        solve_initial_form(f)


def test_binomial_dispatch():
    f = parse_system("x0^2*x1 - 1; x0*x1 - 1;")
    (p,) = solve_initial_form(f)
    assert p.coordinates == (1, 1)


def test_grid_and_binomial_backends_agree():
    f = parse_system("x0^2 - x1; x1^3 - 1;")
    a = solve_initial_form(f, SolverConfig(backend="binomial"))
    b = solve_initial_form(f, SolverConfig(backend="grid", root_order=6))
    assert len(a) == 6
    assert [p.coordinates for p in a] == [p.coordinates for p in b]


def test_grid_cap():
    with pytest.raises(GridTooLarge) as err:
        solve_initial_form(cyclic_system(9), SolverConfig(backend="grid", root_order=9, max_grid=1000))
    assert err.value.size == 9**9


def test_positive_dimensional_binomial_is_reported():
    with pytest.raises(InitialSolverError):
        solve_initial_form(parse_system("x0*x1 - 1;"), SolverConfig(backend="binomial"))


def test_verify_point_examples():
    u = Cyclotomic.root(1, 3)
    c9 = cyclic_system(9, CyclotomicDomain(3))
    t0 = t1 = Cyclotomic.rational(1)
    x = [t0, t0 * t1, u**2 / (t0**2 * t1), t0 * u, t0 * t1 * u, 1 / (t0**2 * t1),
         t0 * u**2, t0 * t1 * u**2, u / (t0**2 * t1)]
    assert verify_point(c9, x).ok
    rep = verify_point(c9, [1] * 9)
    assert not rep.ok and rep.values[0] == 9


def test_float_points_use_tolerance():
    f = parse_system("x0^2 + 1;")
    assert verify_point(f, [1j]).ok
    assert not verify_point(f, [1j + 1e-3]).ok


def test_config_and_point_validation():
    with pytest.raises(ValueError):
        SolverConfig(backend="homotopy")
    with pytest.raises(ValueError):
        SolutionPoint((1, 0))
    assert roots_of_unity_point([0, 1, 2], 3) == (1, Cyclotomic.root(1, 3), Cyclotomic.root(2, 3))
