"""Exact consequences of monomial parametrizations of solution sets.

A :class:`MonomialParametrization` writes every coordinate as one term
``c_j * t^e_j``.  Its image is a coset of a subtorus, which makes the degree
a determinant and set equality a comparison of character values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from random import Random
from typing import Sequence

from .cones import Cone
from .cyclotomic import Cyclotomic, lift_to_order
from .laurent import LaurentPolynomial, PolySystem, coefficient_to_json, format_coefficient, substitute_parametrization
from .linalg import Matrix, det, kernel_basis, rank, row_hermite_basis, rref, smith_normal_form

MAX_RETRIES = 8
COEFF_BOUND = 10**6


class ParametrizationError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialParametrization:
    """x_j = coefficients[j] * t^exponents[j] over d parameters."""

    coefficients: tuple
    exponents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        coefs = tuple(_as_cyclotomic(c) for c in self.coefficients)
        exps = tuple(tuple(self._int(x) for x in e) for e in self.exponents)
        if len(coefs) != len(exps) or not exps:
            raise ParametrizationError("one coefficient and one exponent vector per coordinate")
        if len({len(e) for e in exps}) != 1:
            raise ParametrizationError("exponent vectors differ in length")
        if any(not c for c in coefs):
            raise ParametrizationError("coefficients must be nonzero")
        object.__setattr__(self, "coefficients", coefs)
        object.__setattr__(self, "exponents", exps)

    @staticmethod
    def _int(x) -> int:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ParametrizationError("exponents must be integers")
            return x.numerator
        return int(x)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    @property
    def d(self) -> int:
        return len(self.exponents[0])

    def exponent_matrix(self) -> Matrix:
        """d x n: row i holds the powers of t_i (the tropisms)."""
        return Matrix([[e[i] for e in self.exponents] for i in range(self.d)], cols=self.n)

    def root_order(self) -> int:
        return lcm(*(c.simplify().m for c in self.coefficients))

    def substitute(self, f: LaurentPolynomial) -> LaurentPolynomial:
        return substitute_parametrization(f, self.coefficients, self.exponents, self.d)

    def satisfies(self, system: PolySystem) -> bool:
        """Every equation vanishes identically in the parameters."""
        return all(not self.substitute(f).terms for f in system.polys)

    def permuted(self, perm: Sequence[int]) -> MonomialParametrization:
        """Coordinate j moves to position perm[j]."""
        c = [None] * self.n
        e = [None] * self.n
        for j, p in enumerate(perm):
            c[p] = self.coefficients[j]
            e[p] = self.exponents[j]
        return MonomialParametrization(tuple(c), tuple(e))

    def conjugate(self) -> MonomialParametrization:
        return MonomialParametrization(tuple(c.conjugate() for c in self.coefficients), self.exponents)

    def reparametrized(self, T) -> MonomialParametrization:
        """Substitute t_i = prod_k s_k^T[k][i]; T must be square."""
        T = T if isinstance(T, Matrix) else Matrix(T)
        exps = tuple(T.apply(e) for e in self.exponents)
        return MonomialParametrization(self.coefficients, exps)

    def set_key(self):
        """Identifies the image set: kernel lattice of the exponents and its character values."""
        E = self.exponent_matrix()
        if self.n == self.d and rank(E) == self.n:
            return ((), ())
        rows = row_hermite_basis([list(r) for r in kernel_basis(E)])
        vals = []
        for a in rows:
            v = Cyclotomic.rational(1)
            for c, k in zip(self.coefficients, a):
                if k:
                    v = v * c ** k
            vals.append(_value_key(v.simplify()))
        return (tuple(rows), tuple(vals))

    def same_set(self, other: MonomialParametrization) -> bool:
        return self.n == other.n and self.set_key() == other.set_key()

    def to_json(self) -> dict:
        m = self.root_order()
        E = self.exponent_matrix()
        return {
            "tropisms": [[str(x) for x in r] for r in E],
            "root_order": m,
            "coords": [
                {"exp": [str(x) for x in e], "coef": coefficient_to_json(lift_to_order(c, m)), "second": None}
                for c, e in zip(self.coefficients, self.exponents)
            ],
            "exact": True,
        }

    def __str__(self):
        lines = []
        for j, (c, e) in enumerate(zip(self.coefficients, self.exponents)):
            parts = [] if c == 1 else [format_coefficient(c)]
            for i, k in enumerate(e):
                if k:
                    parts.append(f"t{i}" if k == 1 else f"t{i}^{k}")
            lines.append(f"x{j} = {'*'.join(parts) or '1'}")
        return "\n".join(lines)

    @classmethod
    def from_development(cls, dev) -> MonomialParametrization:
        return cls(dev.coefficients, dev.exponents)


def _as_cyclotomic(c) -> Cyclotomic:
    if isinstance(c, Cyclotomic):
        return c.simplify()
    x = Cyclotomic._coerce(c)
    if x is None:
        raise ParametrizationError(f"coefficient {c!r} is not exact")
    return x.simplify()


def _value_key(c: Cyclotomic):
    return (c.m, tuple(c.c))


# ---------------------------------------------------------------- constructions


def backelin_set(m: int) -> MonomialParametrization:
    """The (m-1)-parameter set of cyclic m^2-roots.

    x_{km+j} = u^k t_0 t_1 ... t_j for j < m - 1 and
    x_{km+m-1} = u^k t_0^{1-m} t_1^{2-m} ... t_{m-2}^{-1},
    with u a primitive m-th root of unity.
    """
    if m < 2:
        raise ParametrizationError("m must be at least 2")
    d = m - 1
    block = []
    for j in range(m - 1):
        block.append(tuple(1 if i <= j else 0 for i in range(d)))
    block.append(tuple(-(m - 1 - i) for i in range(d)))
    coefs, exps = [], []
    for k in range(m):
        u = Cyclotomic.root(k, m).simplify()
        for e in block:
            coefs.append(u)
            exps.append(e)
    return MonomialParametrization(tuple(coefs), tuple(exps))


def backelin_s_form(m: int) -> MonomialParametrization:
    """Same set after s_j = t_0 t_1 ... t_j: x_{km+j} = u^k s_j, x_{km+m-1} = u^k / (s_0 ... s_{m-2})."""
    if m < 2:
        raise ParametrizationError("m must be at least 2")
    d = m - 1
    block = [tuple(int(i == j) for i in range(d)) for j in range(d)] + [(-1,) * d]
    coefs, exps = [], []
    for k in range(m):
        u = Cyclotomic.root(k, m).simplify()
        for e in block:
            coefs.append(u)
            exps.append(e)
    return MonomialParametrization(tuple(coefs), tuple(exps))


def backelin_s_change(m: int) -> Matrix:
    """T with t_i = prod_k s_k^T[k][i] (t_0 = s_0, t_i = s_i / s_{i-1})."""
    d = m - 1
    return Matrix([[1 if k == i else (-1 if k == i - 1 else 0) for i in range(d)] for k in range(d)])


def unimodular_relation(p: MonomialParametrization, q: MonomialParametrization) -> Matrix | None:
    """Integer T with det +-1 and q = p reparametrized by T, or None."""
    if p.n != q.n or p.d != q.d or p.coefficients != q.coefficients:
        return None
    d = p.d
    Ep, Eq = p.exponent_matrix(), q.exponent_matrix()
    if rank(Ep) < d:
        return None
    # solve T * Ep = Eq: rows of T via the pivot columns of Ep
    red, piv = rref(Ep)
    cols = list(piv)
    sub_p = Matrix([[Ep[i, j] for j in cols] for i in range(d)])
    inv = _inverse(sub_p)
    T = [[sum(Eq[r, cols[k]] * inv[k][c] for k in range(d)) for c in range(d)] for r in range(d)]
    if any(Fraction(x).denominator != 1 for row in T for x in row):
        return None
    T = Matrix([[int(x) for x in row] for row in T])
    if abs(det(T)) != 1:
        return None
    for r in range(d):
        for j in range(p.n):
            if sum(T[r, k] * Ep[k, j] for k in range(d)) != Eq[r, j]:
                return None
    return T


def _inverse(a: Matrix) -> list[list[Fraction]]:
    from .linalg import inverse

    inv = inverse(a)
    return [[Fraction(inv[i, j]) for j in range(a.cols)] for i in range(a.rows)]


# ---------------------------------------------------------------- degree


def _random_rational(rng: Random) -> Fraction:
    while True:
        x = Fraction(rng.randint(-COEFF_BOUND, COEFF_BOUND), rng.randint(1, COEFF_BOUND))
        if x:
            return x


def _row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    piv = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse() if isinstance(a[r][c], Cyclotomic) else 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return a, piv


def lattice_index(p: MonomialParametrization) -> int:
    """Index of the lattice spanned by the exponent vectors (generic fiber size)."""
    E = p.exponent_matrix()
    if rank(E) < p.d:
        raise ParametrizationError("parametrization is degenerate: exponent matrix has rank below d")
    return prod(smith_normal_form(E).diagonal)


def origin_in_closure(p: MonomialParametrization) -> bool:
    """Some one-parameter subgroup sends every coordinate to zero.

    By Gordan's alternative this happens exactly when 0 is not in the
    convex hull of the exponent vectors.
    """
    monos = set(p.exponents)
    if (0,) * p.d in monos:
        return False
    return Cone.from_constraints(p.d, (), sorted(monos)).dim == p.d


def degree_binomial_system(p: MonomialParametrization, seed: int = 0):
    """The binomial system t^A = c cut out by d seeded random hyperplanes.

    Hyperplanes through the origin are used when the coordinates carry
    d + 1 distinct monomials; with only d distinct nonconstant monomials the
    hyperplanes get a constant term instead.  Hyperplanes through the origin
    are not generic when the origin lies in the closure of the set, which
    raises :class:`ParametrizationError`.
    """
    d = p.d
    monos = sorted(set(p.exponents))
    zero = (0,) * d
    affine = len(monos) == d and zero not in monos
    if affine:
        monos = [zero] + monos
    if len(monos) != d + 1:
        raise ParametrizationError(
            f"{len(monos)} distinct monomials for {d} parameters; a binomial reduction needs exactly {d + 1}"
        )
    if not affine and origin_in_closure(p):
        raise ParametrizationError("the origin lies in the closure; hyperplanes through it are not generic")
    rng = Random(seed)
    for _ in range(MAX_RETRIES):
        rows = []
        for _ in range(d):
            row = [Cyclotomic.rational(0)] * len(monos)
            for c, e in zip(p.coefficients, p.exponents):
                k = monos.index(e)
                row[k] = row[k] + c * _random_rational(rng)
            if affine:
                row[0] = row[0] + _random_rational(rng)
            rows.append(row)
        # divide by the first monomial: it becomes the constant column, placed last
        cols = monos[1:] + monos[:1]
        mat = [r[1:] + r[:1] for r in rows]
        red, piv = _row_reduce(mat)
        if piv != list(range(d)) or any(not red[i][d] for i in range(d)):
            continue
        A = Matrix([[a - b for a, b in zip(cols[i], monos[0])] for i in range(d)], cols=d)
        if det(A) == 0:
            raise ParametrizationError("parametrization is degenerate: singular binomial system")
        return A, tuple(-red[i][d] for i in range(d))
    raise ParametrizationError(f"no generic hyperplanes after {MAX_RETRIES} draws")


def _pulling_triangulation(points: list[tuple]) -> list[tuple]:
    """Simplices of a pulling triangulation of conv(points)."""
    v = points[0]
    if len(points) == 1:
        return [(v,)]
    cone = Cone.from_generators([(1,) + q for q in points])
    out = []
    seen = set()
    for h in cone.inequalities:
        face = tuple(q for q in points if sum(a * b for a, b in zip(h, (1,) + q)) == 0)
        if v in face or face in seen:
            continue
        seen.add(face)
        out.extend((v,) + s for s in _pulling_triangulation(list(face)))
    return out


def normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """d! times the volume of a full-dimensional lattice polytope in R^d."""
    pts = sorted(set(tuple(q) for q in points))
    d = len(pts[0])
    if len(pts) == 1:
        return 1 if d == 0 else 0
    total = 0
    for simplex in _pulling_triangulation(pts):
        if len(simplex) == d + 1:
            q0 = simplex[0]
            total += abs(det(Matrix([[a - b for a, b in zip(q, q0)] for q in simplex[1:]])))
    return total


def degree_of_parametrization(p: MonomialParametrization, seed: int = 0) -> int:
    """Number of points on the set cut by d generic hyperplanes.

    Uses the binomial reduction when it applies, otherwise counts the torus
    solutions of d generic affine equations in the coordinate monomials:
    the normalized volume of conv({0} and the exponents).  Either count is
    divided by the generic fiber size of the parametrization.
    """
    try:
        A, _ = degree_binomial_system(p, seed)
        count = abs(det(A))
    except ParametrizationError as exc:
        if "degenerate" in str(exc):
            raise
        if rank(p.exponent_matrix()) < p.d:
            raise ParametrizationError("parametrization is degenerate: exponent matrix has rank below d") from exc
        count = normalized_volume(list(p.exponents) + [(0,) * p.d])
    index = lattice_index(p)
    if count % index:
        raise ParametrizationError(f"solution count {count} is not a multiple of the fiber size {index}")
    return count // index


# ---------------------------------------------------------------- orbits


def _shift(n: int, k: int) -> tuple[int, ...]:
    return tuple((j + k) % n for j in range(n))


def _reverse(n: int) -> tuple[int, ...]:
    return tuple((-j) % n for j in range(n))


def orbit_expansion(p: MonomialParametrization, m: int | None = None, patterns: str = "all",
                    include_extra: bool = False) -> list[MonomialParametrization]:
    """Distinct images of p under cyclic shifts, reversal and complex conjugation.

    ``patterns="identity"`` keeps p alone.  Parametrizations describing the
    same set (up to reparametrizing t) are merged.
    """
    n = p.n
    if m is not None and m * m != n:
        raise ParametrizationError(f"expected {m * m} coordinates for m = {m}, got {n}")
    if patterns not in ("all", "identity"):
        raise ValueError("patterns must be 'all' or 'identity'")
    if patterns == "identity":
        return [p]
    found: dict = {}
    frontier = [p]
    found[p.set_key()] = p
    while frontier:
        nxt = []
        for q in frontier:
            for r in (q.permuted(_shift(n, 1)), q.permuted(_reverse(n)), q.conjugate()):
                k = r.set_key()
                if k not in found:
                    found[k] = r
                    nxt.append(r)
        frontier = nxt
    return list(found.values())
