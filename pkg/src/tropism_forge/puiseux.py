"""Leading terms and second terms of Puiseux series from pretropism cones.

For a d-dimensional face of a pretropism cone the engine

1. picks d tropisms: a basis of the integer points in the face's span, in
   echelon ("staggered") form, each basis row taken inside the face when
   possible;
2. builds the unimodular transform with those rows on top, substitutes it
   into the initial form system and divides out the parameter monomials;
3. solves the remaining system in n - d unknowns;
4. checks whether the leading term already solves the whole system and, if
   not, solves the linear conditions for a second term.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from random import Random
from typing import Sequence

from .cones import Cone
from .cyclotomic import Cyclotomic, lift_to_order
from .initial_solver import InitialSolverError, SolverConfig, SolutionPoint, solve_initial_form
from .laurent import (
    LaurentPolynomial,
    PolySystem,
    coefficient_to_json,
    format_coefficient,
    substitute_parametrization,
)
from .linalg import (
    Matrix,
    UnimodularTransform,
    inverse,
    rank_of_vectors,
    row_hermite_basis,
    smith_normal_form,
    transform_from_tropisms,
)
from .polytopes import cyclic_shift, initial_form_system, nested_initial_form, orbit_group, pretropism_cones

log = logging.getLogger(__name__)

Vector = tuple[int, ...]

# search radius for the in-face adjustment of echelon rows
_ADJUST_RADIUS = 8


def max_threads() -> int:
    """Worker cap from TROPISM_FORGE_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("TROPISM_FORGE_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- tropism bases


@dataclass(frozen=True)
class TropismBasis:
    rows: tuple[Vector, ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise ValueError("a tropism basis needs at least one row")
        if rank_of_vectors(rows) != len(rows):
            raise ValueError("tropisms must be linearly independent")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    def matrix(self) -> Matrix:
        return Matrix(self.rows)

    def interior_vector(self) -> Vector:
        return tuple(sum(c) for c in zip(*self.rows))


def saturated_basis(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """A basis of the integer points in the rational span of ``vectors``."""
    vs = [tuple(v) for v in vectors]
    r = rank_of_vectors(vs)
    if r == 0:
        return []
    # drop dependent vectors so the Smith form sees a full-rank matrix
    rows: list[Vector] = []
    for v in vs:
        if rank_of_vectors(rows + [v]) > len(rows):
            rows.append(v)
    snf = smith_normal_form(Matrix(rows))
    vinv = inverse(snf.V)
    return [tuple(int(x) for x in vinv[i]) for i in range(r)]


def _relint(face: Cone, v: Sequence[int]) -> bool:
    """v lies in the relative interior of the face."""
    if not face.contains(v):
        return False
    gens = face.generators()
    for h in face.inequalities:
        if any(_dot(h, g) for g in gens) and _dot(h, v) <= 0:
            return False
    return True


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def select_tropisms(face: Cone, positive_first: bool = True) -> TropismBasis:
    """Staggered tropism basis of a face.

    Rows are chosen last to first.  Row i is an echelon row plus integer
    combinations of the rows already chosen, ranked by: lies in the face;
    (for the first row) positive first coordinate and the row sum in the
    relative interior of the face; smallest 1-norm; lexicographic order.
    """
    gens = list(face.lineality) + list(face.rays)
    h = row_hermite_basis(saturated_basis(gens))
    d = len(h)
    chosen: list[Vector | None] = [None] * d
    for i in range(d - 1, -1, -1):
        later = [chosen[j] for j in range(i + 1, d)]
        radius = _ADJUST_RADIUS if len(later) <= 2 else 2
        best = None
        for sign in (1, -1):
            for ks in product(range(-radius, radius + 1), repeat=len(later)):
                w = [sign * x for x in h[i]]
                for k, b in zip(ks, later):
                    if k:
                        w = [x + k * y for x, y in zip(w, b)]
                w = tuple(w)
                key = [not face.contains(w)]
                if i == 0:
                    total = tuple(sum(c) for c in zip(w, *later))
                    key.append(positive_first and not _first_nonzero_positive(w))
                    key.append(not _relint(face, total))
                key += [sum(abs(x) for x in w), sign < 0, w]
                if best is None or key < best[0]:
                    best = (key, w)
        chosen[i] = best[1]
    return TropismBasis(tuple(chosen))


def _first_nonzero_positive(v) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def cone_faces(cone: Cone, d: int) -> list[Cone]:
    """Faces of dimension exactly d (the cone itself when its dimension is d)."""
    if cone.dim < d:
        return []
    if cone.dim == d:
        return [cone]
    lin = list(cone.lineality)
    if len(lin) > d:
        return []
    rays = list(cone.canonical()[1]) if not lin else list(cone.rays)
    need = d - len(lin)
    faces: dict = {}
    for sub in combinations(rays, need):
        if rank_of_vectors(lin + list(sub)) != d:
            continue
        tight = [hh for hh in cone.inequalities if all(_dot(hh, r) == 0 for r in sub)]
        members = [r for r in rays if all(_dot(hh, r) == 0 for hh in tight)]
        if rank_of_vectors(lin + members) != d:
            continue
        f = Cone.from_generators(members, lin, n=cone.n)
        faces.setdefault(f.canonical(), f)
    return [faces[k] for k in sorted(faces, key=lambda k: (k[1], k[0]))]


# ---------------------------------------------------------------- developments


@dataclass(frozen=True)
class SecondTerm:
    """Correction terms ``coef * t^exp`` added to one coordinate."""

    terms: tuple[tuple[object, tuple], ...]
    increments: tuple[tuple, ...]

    def to_json(self, order: int | None = None) -> dict:
        return {
            "terms": [
                {"coef": _coef_json(c, order), "exp": [_q(x) for x in e], "inc": [_q(x) for x in w]}
                for (c, e), w in zip(self.terms, self.increments)
            ]
        }


@dataclass(frozen=True)
class PuiseuxDevelopment:
    tropisms: TropismBasis
    transform: UnimodularTransform
    face: tuple[Vector, ...]
    initial_point: tuple
    exponents: tuple[tuple, ...]
    coefficients: tuple
    exact: bool = False
    second: tuple[SecondTerm | None, ...] | None = None
    second_mode: str | None = None
    curve: tuple[Fraction, ...] = ()
    status: str = "leading term"
    diagnostics: tuple[str, ...] = ()

    @property
    def d(self) -> int:
        return self.tropisms.d

    @property
    def n(self) -> int:
        return len(self.exponents)

    def root_order(self) -> int:
        m = 1
        for c in self._all_coefficients():
            if isinstance(c, Cyclotomic):
                m = lcm(m, c.simplify().m)
        return m

    def _all_coefficients(self):
        yield from self.coefficients
        for s in self.second or ():
            if s is not None:
                for c, _ in s.terms:
                    yield c

    def leading_polynomial(self, f: LaurentPolynomial) -> LaurentPolynomial:
        return substitute_parametrization(f, self.coefficients, self.exponents, self.d)

    def sort_key(self):
        return (self.tropisms.rows, tuple(_coef_sort_key(c) for c in self.coefficients))

    def to_json(self) -> dict:
        m = self.root_order()
        coords = []
        for j in range(self.n):
            s = self.second[j] if self.second else None
            coords.append({
                "exp": [_q(x) for x in self.exponents[j]],
                "coef": _coef_json(self.coefficients[j], m),
                "second": s.to_json(m) if s is not None else None,
            })
        return {
            "tropisms": [list(r) for r in self.tropisms.rows],
            "face": [list(r) for r in self.face],
            "root_order": m,
            "transform": self.transform.M.to_json(),
            "coords": coords,
            "exact": self.exact,
            "status": self.status,
            "second_mode": self.second_mode,
            "curve": [_q(g) for g in self.curve],
            "diagnostics": list(self.diagnostics),
        }

    def __str__(self):
        names = [f"x{j}" for j in range(self.n)]
        lines = [f"tropisms {[list(r) for r in self.tropisms.rows]}  ({self.status})"]
        for j in range(self.n):
            s = f"  {names[j]} = {_monomial_text(self.coefficients[j], self.exponents[j])}"
            if self.second and self.second[j] is not None:
                for c, e in self.second[j].terms:
                    s += f" + ({_monomial_text(c, e)})"
            lines.append(s)
        if self.second_mode == "curve":
            on = ", ".join(f"t{k} = {_q(g)}*t0" for k, g in enumerate(self.curve, start=1))
            lines.append(f"  (second term along the curve {on})")
        return "\n".join(lines)


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coef_json(c, order: int | None) -> str:
    if isinstance(c, Cyclotomic) and order:
        return coefficient_to_json(lift_to_order(c, order))
    return coefficient_to_json(c)


def _coef_sort_key(c):
    if isinstance(c, Cyclotomic):
        k = c.root_of_unity_exponent()
        return (0, Fraction(k, c.m) if k is not None else Fraction(2), c.simplify().sort_key())
    return (1, str(c))


def _monomial_text(c, e) -> str:
    parts = [] if c == 1 else [format_coefficient(c)]
    for i, k in enumerate(e):
        if k:
            parts.append(f"t{i}" if k == 1 else f"t{i}^{_q(k)}")
    return "*".join(parts) or "1"


@dataclass
class DevelopReport:
    developments: list[PuiseuxDevelopment]
    diagnostics: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "developments": [d.to_json() for d in self.developments],
            "diagnostics": self.diagnostics,
        }


def _is_cyclically_symmetric(system: PolySystem) -> bool:
    n = system.nvars
    if n < 2:
        return False

    def act(f):
        return frozenset((tuple(e[(j - 1) % n] for j in range(n)), c) for e, c in f.terms.items())

    polys = {frozenset(f.terms.items()) for f in system.polys}
    return all(act(f) in polys for f in system.polys)


def reduce_initial_system(initial: PolySystem, transform: UnimodularTransform) -> PolySystem:
    """Substitute x = y^M, divide out monomials and drop the parameters y_0..y_{d-1}."""
    d, n = transform.d, initial.nvars
    polys = []
    for i, f in enumerate(initial.polys):
        g = f.substitute(transform)
        if not g.terms:
            continue
        lows = [min(e[k] for e in g.terms) for k in range(n)]
        heads = {e[:d] for e in g.terms}
        if len(heads) != 1:
            raise InitialSolverError(f"equation {i} still depends on the parameters after the transform")
        g = g.shift([-x for x in lows])
        polys.append(LaurentPolynomial(n - d, {e[d:]: c for e, c in g.terms.items()}))
    names = tuple(f"y{k}" for k in range(d, n))
    return PolySystem(n - d, tuple(polys), names, initial.root_order)


def _development_from_solution(tb: TropismBasis, transform: UnimodularTransform, face: Cone,
                               sol: SolutionPoint) -> PuiseuxDevelopment:
    d, m = tb.d, transform.M
    n = m.cols
    exps, coefs = [], []
    for j in range(n):
        exps.append(tuple(m[i, j] for i in range(d)))
        c = 1
        for i in range(d, n):
            k = m[i, j]
            if k:
                c = c * sol.coordinates[i - d] ** int(k)
        if isinstance(c, (int, Fraction)):
            c = Cyclotomic.rational(c)
        coefs.append(c.simplify() if isinstance(c, Cyclotomic) else c)
    lin, rays = face.canonical()
    return PuiseuxDevelopment(
        tropisms=tb,
        transform=transform,
        face=tuple(lin) + tuple(rays),
        initial_point=sol.coordinates,
        exponents=tuple(exps),
        coefficients=tuple(coefs),
    )


def develop_face(system: PolySystem, face: Cone, cfg: SolverConfig, positive_first: bool = True,
                 second: bool = True) -> tuple[list[PuiseuxDevelopment], list[dict]]:
    """Developments carried by one d-dimensional face."""
    tb = select_tropisms(face, positive_first)
    label = {"face": [list(r) for r in face.canonical()[1]], "tropisms": [list(r) for r in tb.rows]}
    w = tb.interior_vector()
    if not _relint(face, w):
        w = face.interior_point()
    initial = initial_form_system(system, [w])
    try:
        transform = transform_from_tropisms(tb.matrix())
        reduced = reduce_initial_system(initial, transform)
        if reduced.nvars == 0:
            sols = [] if any(f.terms for f in reduced.polys) else [SolutionPoint(())]
        else:
            sols = solve_initial_form(reduced, cfg)
    except InitialSolverError as exc:
        status = "unresolved" if "positive dimensional" in str(exc) else "skipped"
        return [], [dict(label, status=status, reason=str(exc))]
    if not sols:
        return [], [dict(label, status="skipped",
                         reason="initial form system has no solution with all coordinates nonzero")]
    devs = []
    for s in sols:
        dev = _development_from_solution(tb, transform, face, s)
        exact = leading_term_exact(system, dev)
        dev = replace(dev, exact=exact, status="exact" if exact else "leading term")
        if not exact and second:
            dev = second_term(system, dev, cfg)
        devs.append(dev)
    return devs, []


def develop_report(system: PolySystem, d: int, cfg: SolverConfig | None = None, positive_first: bool = True,
                   records=None, second: bool = True) -> DevelopReport:
    """Run the whole pipeline over the pretropism cones of ``system``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if not system.polys:
        raise ValueError("empty system")
    cfg = cfg or SolverConfig()
    if records is None:
        records = pretropism_cones(system, d, positive_first)
    if _is_cyclically_symmetric(system) and records:
        reps = [o.representative for o in orbit_group(records, cyclic_shift(system.nvars, 1))]
    else:
        reps = list(records)
    faces: dict = {}
    diags: list[dict] = []
    for r in reps:
        fs = cone_faces(r.cone, d)
        if not fs:
            # every face contains the lineality space, so the set is larger than d
            diags.append({"face": [list(x) for x in r.cone.canonical()[1]], "tropisms": [],
                          "status": "unresolved",
                          "reason": f"cone has lineality of dimension {len(r.cone.lineality)} > {d}"})
        for f in fs:
            faces.setdefault(f.canonical(), f)
    ordered = [faces[k] for k in sorted(faces, key=lambda k: (k[1], k[0]))]

    def work(face):
        return develop_face(system, face, cfg, positive_first, second)

    workers = max_threads()
    if workers > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, ordered))
    else:
        results = [work(f) for f in ordered]
    devs: dict = {}
    for ds, dg in results:
        diags.extend(dg)
        for dev in ds:
            key = (dev.exponents, tuple(_coef_sort_key(c) for c in dev.coefficients))
            devs.setdefault(key, dev)
    out = sorted(devs.values(), key=lambda x: x.sort_key())
    return DevelopReport(out, diags)


def develop(system: PolySystem, d: int, cfg: SolverConfig | None = None, positive_first: bool = True,
            **kw) -> list[PuiseuxDevelopment]:
    return develop_report(system, d, cfg, positive_first, **kw).developments


def minimality_certificate(system: PolySystem, tropisms: TropismBasis) -> bool:
    """Monomials kept by the nested initial forms are strictly lower along the row sum.

    The first tropism is applied first, so the kept monomials are those of
    in_{v_{d-1}}(...in_{v_1}(in_{v_0}(f))).
    """
    v = tropisms.interior_vector()
    for f in system.polys:
        kept = nested_initial_form(f, tropisms.rows).terms
        if not kept:
            return False
        top = max(_dot(a, v) for a in kept)
        if len({_dot(a, v) for a in kept}) != 1:
            return False
        if any(_dot(b, v) <= top for b in f.terms if b not in kept):
            return False
    return True


def leading_term_exact(system: PolySystem, dev: PuiseuxDevelopment) -> bool:
    """Whether the leading monomials solve every equation identically in t."""
    return all(not dev.leading_polynomial(f).terms for f in system.polys)


# ---------------------------------------------------------------- second term


class SecondTermFailure(ArithmeticError):
    def __init__(self, msg: str, residual=None):
        super().__init__(msg)
        self.residual = residual


def _level(e, omega) -> Fraction:
    return sum((Fraction(x) * w for x, w in zip(e, omega)), Fraction(0))


def _lowest(p: dict, omega):
    lv = min(_level(e, omega) for e in p)
    return lv, {e: c for e, c in p.items() if _level(e, omega) == lv}


def _scaled_terms(f: LaurentPolynomial, coefs, exps, nparams, j):
    """x_j * d f / d x_j at the leading term."""
    g = LaurentPolynomial(f.nvars, {e: c * e[j] for e, c in f.terms.items() if e[j]})
    return substitute_parametrization(g, coefs, exps, nparams).terms


def _solve_linear(rows: list[list], rhs: list) -> list | None:
    """A solution of rows * a = rhs (free unknowns set to zero), or None."""
    nunk = len(rows[0]) if rows else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv = []
    r = 0
    for c in range(nunk):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    for i in range(r, len(a)):
        if a[i][nunk]:
            return None
    sol = [0] * nunk
    for i, c in enumerate(piv):
        sol[c] = a[i][nunk]
    return sol


def _restrict_to_curve(coefs, exps, gammas):
    """t_k = gamma_k * t_0 for k >= 1: coordinates as monomials in t_0 alone."""
    new_c, new_e = [], []
    for c, e in zip(coefs, exps):
        for k, g in enumerate(gammas, start=1):
            if e[k]:
                x = Fraction(e[k])
                if x.denominator != 1:
                    raise SecondTermFailure("curve restriction needs integer exponents")
                c = c * Fraction(g) ** int(x)
        new_c.append(c)
        new_e.append((sum(e),))
    return new_c, new_e


def _linear_second_term(system: PolySystem, coefs, exps, nparams, movable):
    """Solve the lowest-order linear conditions; returns {j: [(a, w), ...]}."""
    omega = (1,) * nparams
    residuals = []
    for i, f in enumerate(system.polys):
        r = substitute_parametrization(f, coefs, exps, nparams).terms
        if r:
            residuals.append((i, f, r))
    if not residuals:
        return {}
    derivs = {(i, j): _scaled_terms(f, coefs, exps, nparams, j) for i, f, _ in residuals for j in movable}
    cands = set()
    lows = {}
    for i, f, r in residuals:
        rho, r0 = _lowest(r, omega)
        lows[i] = rho
        for j in movable:
            dij = derivs[(i, j)]
            if not dij:
                continue
            _, d0 = _lowest(dij, omega)
            for a in r0:
                for b in d0:
                    w = tuple(x - y for x, y in zip(a, b))
                    if _level(w, omega) > 0:
                        cands.add(w)
    if not cands:
        raise SecondTermFailure("no exponent increment matches the residual",
                                {i: r for i, _, r in residuals})
    unknowns = [(j, w) for j in movable for w in sorted(cands)]
    eq_rows, eq_rhs = [], []
    for i, f, r in residuals:
        rho = lows[i]
        contrib: dict = {}
        for col, (j, w) in enumerate(unknowns):
            for e, c in derivs[(i, j)].items():
                mono = tuple(x + y for x, y in zip(e, w))
                if _level(mono, omega) <= rho:
                    contrib.setdefault(mono, {})[col] = c
        monos = set(contrib) | {e for e in r if _level(e, omega) <= rho}
        for mono in sorted(monos, key=lambda e: tuple(Fraction(x) for x in e)):
            row = [0] * len(unknowns)
            for col, c in contrib.get(mono, {}).items():
                row[col] = c
            eq_rows.append(row)
            eq_rhs.append(-r.get(mono, 0))
    sol = _solve_linear(eq_rows, eq_rhs)
    if sol is None:
        raise SecondTermFailure("inconsistent linear conditions for the second term",
                                {i: _lowest(r, omega)[1] for i, _, r in residuals})
    out: dict = {}
    for (j, w), a in zip(unknowns, sol):
        if a:
            out.setdefault(j, []).append((a, w))
    return out


def _movable_coordinates(dev: PuiseuxDevelopment) -> list[int]:
    """Coordinates that depend on the initial form solution (not pure parameter monomials)."""
    m = dev.transform.M
    d = dev.d
    return [j for j in range(m.cols) if any(m[i, j] for i in range(d, m.rows))]


def curve_gammas(nparams: int, seed: int) -> list[Fraction]:
    rng = Random(seed)
    return [Fraction(rng.randint(2, 97), rng.randint(2, 97)) for _ in range(nparams - 1)]


def second_term(system: PolySystem, dev: PuiseuxDevelopment, cfg: SolverConfig | None = None,
                mode: str = "auto") -> PuiseuxDevelopment:
    """Attach a second term solving the lowest-order linear conditions.

    ``mode`` is ``curve`` (restrict t_k = gamma_k t_0 with seeded rational
    gammas), ``full`` (all parameters) or ``auto`` (curve first as the
    existence check, then the full ansatz).  On failure the development is
    returned unchanged with a diagnostic.
    """
    cfg = cfg or SolverConfig()
    if dev.exact:
        return dev
    if mode not in ("auto", "curve", "full"):
        raise ValueError(f"unknown second-term mode {mode!r}")
    movable = _movable_coordinates(dev)
    d = dev.d
    result = None
    used = None
    gammas = ()
    try:
        if mode in ("auto", "curve") and d > 1:
            gammas = curve_gammas(d, cfg.seed)
            cc, ce = _restrict_to_curve(dev.coefficients, dev.exponents, gammas)
            curve = _linear_second_term(system, cc, ce, 1, movable)
            if mode == "curve":
                result, used = (curve, ce, cc), "curve"
        if result is None:
            full = _linear_second_term(system, dev.coefficients, dev.exponents, d, movable)
            result, used = (full, dev.exponents, dev.coefficients), "full"
    except SecondTermFailure as exc:
        return replace(dev, diagnostics=dev.diagnostics + (f"second term: {exc}",))
    sol, exps, coefs = result
    terms = []
    for j in range(dev.n):
        if j not in sol:
            terms.append(None)
            continue
        ts, incs = [], []
        for a, w in sol[j]:
            ts.append((coefs[j] * a, tuple(x + y for x, y in zip(exps[j], w))))
            incs.append(w)
        terms.append(SecondTerm(tuple(ts), tuple(incs)))
    return replace(dev, second=tuple(terms), second_mode=used, status="initial development",
                   curve=tuple(gammas) if used == "curve" else ())


def truncated_series(dev: PuiseuxDevelopment, mode_exps=None):
    """Per coordinate the list of (coef, exponent) terms: leading plus second."""
    out = []
    for j in range(dev.n):
        terms = [(dev.coefficients[j], dev.exponents[j])]
        if dev.second and dev.second[j] is not None and dev.second_mode == "full":
            terms += list(dev.second[j].terms)
        out.append(terms)
    return out


def substitute_series(f: LaurentPolynomial, series, nparams: int) -> LaurentPolynomial:
    """f at x_j = sum of the given monomial terms, exact Laurent arithmetic in t."""
    total = LaurentPolynomial(nparams)
    xs = [LaurentPolynomial(nparams, {tuple(e): c for c, e in terms}) for terms in series]
    for a, c in f.terms.items():
        term = LaurentPolynomial.constant(nparams, c)
        for j, k in enumerate(a):
            if k:
                term = term * xs[j] ** k
        total = total + term
    return total
