"""Binomial systems x^A = c.

A square system is diagonalized by its Smith form and solved by extracting
roots coordinate by coordinate.  A system with more unknowns than equations
is first reduced with the unimodular transform built from the kernel of A;
the parameters then drop out and a square system in the remaining
coordinates is left.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, isqrt, prod
from typing import Sequence

from .cyclotomic import Cyclotomic
from .laurent import LaurentPolynomial, PolySystem
from .linalg import (
    LinAlgError,
    Matrix,
    UnimodularTransform,
    as_matrix,
    build_unimodular_transform,
    det,
    kernel_basis,
    rank,
    smith_normal_form,
)


class BinomialError(ValueError):
    """Input is not a solvable binomial system."""


@dataclass(frozen=True)
class BinomialSystem:
    """Equations ``prod_j x_j^A[i][j] = c[i]``."""

    A: Matrix
    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        object.__setattr__(self, "c", tuple(self.c))
        if self.A.rows != len(self.c):
            raise BinomialError("one coefficient per equation is required")
        if self.A.rows > self.A.cols:
            raise BinomialError("more equations than unknowns")
        if any(_is_zero(x) for x in self.c):
            raise BinomialError("binomial coefficients must be nonzero")

    @property
    def k(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @classmethod
    def from_polys(cls, polys: Sequence[LaurentPolynomial]) -> BinomialSystem:
        """Read ``alpha x^p + beta x^q`` as ``x^(p - q) = -beta / alpha``."""
        rows, cs = [], []
        for f in polys:
            terms = f.sorted_terms()
            if len(terms) != 2:
                raise BinomialError(f"equation has {len(terms)} terms, a binomial needs exactly 2")
            (p, alpha), (q, beta) = terms
            rows.append([a - b for a, b in zip(p, q)])
            cs.append(-beta / alpha)
        if not rows:
            raise BinomialError("empty binomial system")
        return cls(Matrix(rows), tuple(cs))

    def to_system(self) -> PolySystem:
        n = self.n
        polys = []
        for row, c in zip(self.A, self.c):
            pos = tuple(max(a, 0) for a in row)
            neg = tuple(max(-a, 0) for a in row)
            polys.append(LaurentPolynomial(n, {pos: 1, neg: -c}) if pos != neg else LaurentPolynomial(n, {pos: 1 - c}))
        return PolySystem(n, tuple(polys))


@dataclass(frozen=True)
class ParametricSolutionSet:
    """x = y^M with y_0..y_{d-1} free and the rest taken from ``points``.

    ``denominators[i]`` is the denominator of parameter row ``i``; with
    ``t_i = s_i^denominators[i]`` every exponent is an integer.
    """

    transform: UnimodularTransform
    d: int
    points: tuple[tuple, ...]
    denominators: tuple[int, ...] = field(default=())

    @property
    def M(self) -> Matrix:
        return self.transform.M

    def __len__(self):
        return len(self.points)

    def evaluate(self, params: Sequence, point_index: int = 0) -> tuple:
        """Coordinates x for parameter values ``s`` (see class docstring)."""
        if len(params) != self.d:
            raise ValueError(f"expected {self.d} parameter values")
        m = self.M
        y = list(self.points[point_index])
        out = []
        for j in range(m.cols):
            v = 1
            for i in range(self.d):
                e = m[i, j] * (self.denominators[i] if self.denominators else 1)
                if isinstance(e, Fraction):
                    if e.denominator != 1:
                        raise ArithmeticError("parameter exponent is not integral after scaling")
                    e = e.numerator
                v = v * _pow(params[i], e)
            for i in range(self.d, m.rows):
                v = v * _pow(y[i - self.d], m[i, j])
            out.append(v)
        return tuple(out)

    def to_json(self) -> dict:
        from .laurent import coefficient_to_json

        return {
            "d": self.d,
            "transform": self.transform.to_json(),
            "points": [[coefficient_to_json(x) for x in p] for p in self.points],
        }


def _is_zero(x) -> bool:
    return not x if not isinstance(x, complex) else x == 0


def _pow(x, e: int):
    if e == 0:
        return 1
    if e < 0 and isinstance(x, int):
        return Fraction(1, x**-e)
    return x**e


# ---------------------------------------------------------------- root extraction


def _rational_root(q: Fraction, e: int) -> Fraction | None:
    """Positive rational e-th root of q > 0, if it exists."""

    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / e)) if n < 2**1000 else None
        if r is None:
            lo, hi = 0, 1 << (n.bit_length() // e + 1)
            while lo < hi:
                mid = (lo + hi) // 2
                if mid**e < n:
                    lo = mid + 1
                else:
                    hi = mid
            r = lo
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**e == n:
                return c
        return None

    if e == 2:
        a, b = isqrt(q.numerator), isqrt(q.denominator)
        return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None
    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _unit_times_rational(g: Cyclotomic) -> tuple[int, int, Fraction] | None:
    """Write g = u_N^k * r with r > 0 rational; returns (N, k, r)."""
    n = g.m * 2 // gcd(g.m, 2)
    for k in range(n):
        r = (g * Cyclotomic.root(-k, n)).rational_value()
        if r is not None and r > 0:
            return n, k, r
    return None


def exact_roots(gamma, e: int) -> list[Cyclotomic] | None:
    """All e solutions of y^e = gamma in a cyclotomic field, or None.

    Works when gamma is a root of unity times a positive rational that has
    a rational e-th root.
    """
    if e <= 0:
        raise ValueError("root degree must be positive")
    g = Cyclotomic._coerce(gamma)
    if g is None or not g:
        return None
    split = _unit_times_rational(g)
    if split is None:
        return None
    n, k, r = split
    base = _rational_root(r, e)
    if base is None:
        return None
    order = n * e
    return [(Cyclotomic.root(k + n * j, order) * base).simplify() for j in range(e)]


def _float_roots(gamma, e: int) -> list[complex]:
    r = cmath.exp(cmath.log(complex(gamma)) / e)
    return [r * cmath.exp(2j * cmath.pi * j / e) for j in range(e)]


# ---------------------------------------------------------------- solvers


def solve_square_binomial(A, c, exact: bool | None = None) -> list[tuple]:
    """All |det A| solutions of y^A = c for square nonsingular A.

    With U·A·V = S the substitution log y = V log z turns the system into
    z_r^{s_r} = prod_i c_i^{U[r][i]}.  Roots are exact cyclotomic numbers
    when possible (``exact`` None or True); otherwise complex floats.  With
    ``exact=True`` a non-extractable root raises :class:`BinomialError`.
    """
    A = as_matrix(A)
    c = tuple(c)
    if A.rows != A.cols:
        raise BinomialError("square binomial solver needs a square exponent matrix")
    if A.rows != len(c):
        raise BinomialError("one coefficient per equation is required")
    k = A.rows
    if k == 0:
        return [()]
    if det(A) == 0:
        raise BinomialError("singular exponent matrix")
    snf = smith_normal_form(A)
    s = snf.diagonal
    U, V = snf.U, snf.V
    floating = exact is False or any(isinstance(x, complex) for x in c)
    zroots = None
    if not floating:
        gammas = [prod((_pow(c[i], U[r, i]) for i in range(k)), start=Cyclotomic.rational(1)) for r in range(k)]
        zroots = [exact_roots(g, s[r]) for r, g in enumerate(gammas)]
        if any(z is None for z in zroots):
            if exact:
                raise BinomialError("roots are not expressible in a cyclotomic field")
            zroots = None
    if zroots is None:
        gammas = [prod((complex(c[i]) ** U[r, i] for i in range(k)), start=1 + 0j) for r in range(k)]
        zroots = [_float_roots(g, s[r]) for r, g in enumerate(gammas)]
    out = []
    for z in product(*zroots):
        y = []
        for j in range(k):
            v = 1
            for l in range(k):
                v = v * _pow(z[l], V[j, l])
            y.append(v.simplify() if isinstance(v, Cyclotomic) else v)
        out.append(tuple(y))
    return _sorted_points(out)


def _point_key(p):
    return tuple(x.sort_key() if isinstance(x, Cyclotomic) else (1 << 30, x.real, x.imag) for x in p)


def _sorted_points(points):
    return sorted(points, key=_point_key)


def solve_binomial(system: BinomialSystem, exact: bool | None = None) -> ParametricSolutionSet:
    """Solve x^A = c with A of full row rank k; the solution set has n - k parameters."""
    A = system.A
    k, n = A.rows, A.cols
    if rank(A) < k:
        raise BinomialError("no (n-k)-dimensional solution set for general values of c: rank deficient")
    d = n - k
    try:
        B = kernel_basis(A) if d else Matrix.zeros(0, n)
    except LinAlgError as exc:
        raise BinomialError(str(exc)) from exc
    T = build_unimodular_transform(B, n)
    M = T.M
    residual = []
    for row in A:
        e = M.apply(row)
        if any(e[:d]):
            raise AssertionError("transform failed to eliminate the parameters")
        tail = []
        for x in e[d:]:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise AssertionError("fractional residual exponent")
                x = x.numerator
            tail.append(x)
        residual.append(tail)
    R = Matrix(residual, cols=k)
    points = solve_square_binomial(R, system.c, exact)
    return ParametricSolutionSet(T, d, tuple(points), tuple(T.denominators[:d]))


def residual_exponents(system: BinomialSystem, sol: ParametricSolutionSet) -> Matrix:
    """The k x k exponent matrix left after the parameters are eliminated."""
    d = sol.d
    return Matrix([list(sol.M.apply(row))[d:] for row in system.A], cols=system.n - d)
