"""Solutions with all coordinates nonzero of transformed initial form systems.

Backends:

``binomial``
    every equation has two terms; solved exactly through the Smith form.
``grid``
    every unknown runs over the m-th roots of unity and each of the m^k
    candidates is checked exactly in the cyclotomic field.
``auto``
    ``binomial`` when it applies, else ``grid``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import Sequence

from . import kernels
from .binomial import BinomialError, solve_square_binomial
from .cyclotomic import Cyclotomic, cyclotomic_polynomial, lift_to_order
from .laurent import PolySystem, evaluate
from .linalg import Matrix, rank

log = logging.getLogger(__name__)

BACKENDS = ("auto", "grid", "binomial")


class InitialSolverError(ValueError):
    """No backend can solve the system as given."""


class GridTooLarge(InitialSolverError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"grid of {size} candidates exceeds the cap of {cap}")
        self.size = size
        self.cap = cap


@dataclass(frozen=True)
class SolverConfig:
    backend: str = "auto"
    root_order: int | None = None
    max_grid: int = 10**6
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; choose from {', '.join(BACKENDS)}")
        if self.root_order is not None and self.root_order < 1:
            raise ValueError("root order must be positive")
        if self.max_grid < 1:
            raise ValueError("max_grid must be positive")


@dataclass(frozen=True)
class SolutionPoint:
    coordinates: tuple
    residual: float = 0.0
    multiplicity: str = "unknown"

    def __post_init__(self):
        if any(not x for x in self.coordinates):
            raise ValueError("solution points have all coordinates nonzero")

    def to_json(self) -> dict:
        from .laurent import coefficient_to_json

        return {
            "coordinates": [coefficient_to_json(x) for x in self.coordinates],
            "residual": self.residual,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class ResidualReport:
    values: tuple
    exact: bool
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        if self.exact:
            return all(not v for v in self.values)
        return all(abs(v) <= self.tol for v in self.values)

    @property
    def max_abs(self) -> float:
        return max((abs(complex(v)) for v in self.values), default=0.0)

    @property
    def zero_flags(self) -> tuple[bool, ...]:
        if self.exact:
            return tuple(not v for v in self.values)
        return tuple(abs(v) <= self.tol for v in self.values)


def _is_exact(x) -> bool:
    return not isinstance(x, (complex, float))


def verify_point(system: PolySystem, point, tol: float = 1e-10) -> ResidualReport:
    """Exact zero test per equation, or residual magnitudes for float points."""
    coords = point.coordinates if isinstance(point, SolutionPoint) else tuple(point)
    if any(not x for x in coords):
        for f in system.polys:
            for e in f.terms:
                if any(k < 0 and not x for k, x in zip(e, coords)):
                    raise ZeroDivisionError("zero coordinate raised to a negative power")
    vals = tuple(evaluate(f, coords) for f in system.polys)
    exact = all(_is_exact(x) for x in coords) and all(
        _is_exact(c) for f in system.polys for c in f.terms.values()
    )
    if not exact:
        vals = tuple(complex(v) for v in vals)
        return ResidualReport(vals, False, tol)
    return ResidualReport(vals, True)


def _is_binomial(system: PolySystem) -> bool:
    return all(len(f.terms) == 2 for f in system.polys)


def default_root_order(system: PolySystem) -> int:
    """Grid order used when none is configured: the system's own order, at least 2."""
    return lcm(2, system.root_order)


def solve_initial_form(system: PolySystem, cfg: SolverConfig | None = None) -> list[SolutionPoint]:
    """All solutions found by the configured backend, deduplicated and sorted."""
    cfg = cfg or SolverConfig()
    polys = [f for f in system.polys]
    for i, f in enumerate(polys):
        if len(f.terms) < 2:
            raise InitialSolverError(
                f"equation {i} has {len(f.terms)} term(s); no solution with all coordinates nonzero"
            )
    backend = cfg.backend
    if backend == "auto":
        backend = "binomial" if _is_binomial(system) else "grid"
    if backend == "binomial":
        if not _is_binomial(system):
            raise InitialSolverError("binomial backend needs exactly two terms in every equation")
        points = _solve_binomial_points(system, cfg)
    else:
        points = _solve_grid(system, cfg)
    out = []
    seen = set()
    for p in points:
        rep = verify_point(system, p, cfg.tol)
        if not rep.ok:
            continue
        key = tuple(x.simplify() if isinstance(x, Cyclotomic) else x for x in p)
        if key in seen:
            continue
        seen.add(key)
        out.append(SolutionPoint(key, rep.max_abs if not rep.exact else 0.0))
    return sorted(out, key=lambda s: _coord_key(s.coordinates))


def _coord_key(p):
    out = []
    for x in p:
        if isinstance(x, Cyclotomic):
            k = x.root_of_unity_exponent()
            out.append((0, Fraction(k, x.m) if k is not None else Fraction(2), x.sort_key()))
        else:
            out.append((1, complex(x).real, complex(x).imag))
    return tuple(out)


# ---------------------------------------------------------------- binomial


def _solve_binomial_points(system: PolySystem, cfg: SolverConfig) -> list[tuple]:
    # independent equations chosen greedily; the others are checked afterwards
    rows, eqs = [], []
    for f in system.polys:
        (p, alpha), (q, beta) = f.sorted_terms()
        row = [a - b for a, b in zip(p, q)]
        if rank(Matrix(rows + [row], cols=system.nvars)) > len(rows):
            rows.append(row)
            eqs.append(-beta / alpha)
    if len(rows) < system.nvars:
        raise InitialSolverError("binomial system has a positive dimensional solution set")
    try:
        return solve_square_binomial(Matrix(rows, cols=system.nvars), eqs)
    except BinomialError as exc:
        raise InitialSolverError(str(exc)) from exc


# ---------------------------------------------------------------- grid


def _integer_vector(c: Cyclotomic, order: int) -> tuple[list[Fraction], int]:
    v = list(lift_to_order(c, order).c)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return v, den


def grid_equations(system: PolySystem, m: int):
    """Kernel input for an exact grid search over m-th roots of unity.

    Returns ``(order, equations, phi, step)``: arithmetic happens in
    Q(u_order) with ``order`` a multiple of m, candidates are the powers
    u_order^(a * step), and each equation is a list of (scaled exponent,
    integer coefficient vector) pairs sharing one denominator.
    """
    order = m
    for f in system.polys:
        for c in f.terms.values():
            order = lcm(order, Cyclotomic._coerce(c).simplify().m)
    step = order // m
    phi = list(cyclotomic_polynomial(order))
    eqs = []
    for f in system.polys:
        den = 1
        vecs = []
        for e, c in f.sorted_terms():
            v, dd = _integer_vector(c, order)
            den = den * dd // gcd(den, dd)
            vecs.append((e, v))
        terms = []
        for e, v in vecs:
            ints = [int(x * den) for x in v] + [0] * (order - len(v))
            terms.append((tuple((a * step) % order for a in e), ints))
        eqs.append(terms)
    return order, eqs, phi, step


def _solve_grid(system: PolySystem, cfg: SolverConfig) -> list[tuple]:
    m = cfg.root_order or default_root_order(system)
    k = system.nvars
    size = m**k
    if size > cfg.max_grid:
        raise GridTooLarge(size, cfg.max_grid)
    coefs = [c for f in system.polys for c in f.terms.values()]
    if not all(_is_exact(c) for c in coefs):
        return _solve_grid_float(system, m, cfg)
    order, eqs, phi, step = grid_equations(system, m)
    log.debug("grid search: %d^%d candidates in Q(u_%d)", m, k, order)
    found = kernels.grid_search(order, k, eqs, phi, 0, m)
    return [tuple(Cyclotomic.root(a * step, order).simplify() for a in cand) for cand in found]


def _solve_grid_float(system: PolySystem, m: int, cfg: SolverConfig) -> list[tuple]:
    import cmath

    roots = [cmath.exp(2j * cmath.pi * a / m) for a in range(m)]
    out = []
    for cand in product(range(m), repeat=system.nvars):
        pt = tuple(roots[a] for a in cand)
        if all(abs(complex(evaluate(f, pt))) <= cfg.tol for f in system.polys):
            out.append(pt)
    return out


def roots_of_unity_point(exponents: Sequence[int], m: int) -> tuple[Cyclotomic, ...]:
    """(u^e_0, u^e_1, ...) with u a primitive m-th root of unity."""
    return tuple(Cyclotomic.root(e, m).simplify() for e in exponents)
