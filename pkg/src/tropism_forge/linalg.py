"""Exact integer and rational linear algebra.

Matrices are immutable and hold Python ints or :class:`fractions.Fraction`
entries, so nothing here ever rounds.  The normal forms use gcd-pivot
elementary operations; the pivot is the entry of smallest absolute value,
ties broken by lowest (row, column) index, which makes every factorization
deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class LinAlgError(ValueError):
    """Raised on singular or rank-deficient input."""


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


class Matrix:
    """Immutable dense matrix with exact entries (int or Fraction)."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Sequence], cols: int | None = None):
        e = tuple(tuple(_clean(x) for x in row) for row in entries)
        if cols is None:
            if not e:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(e[0])
        for row in e:
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for x in row:
                if not isinstance(x, (int, Fraction)) or isinstance(x, bool):
                    raise TypeError(f"matrix entries must be exact, got {type(x).__name__}")
        self.rows = len(e)
        self.cols = cols
        self._e = e

    # construction
    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, values: Sequence) -> Matrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._e[i][j]
        return self._e[idx]

    def __iter__(self):
        return iter(self._e)

    def __len__(self):
        return self.rows

    def tolist(self) -> list[list]:
        return [list(r) for r in self._e]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def __eq__(self, other):
        if isinstance(other, Matrix):
            return self.shape == other.shape and self._e == other._e
        if isinstance(other, (list, tuple)):
            return self._e == tuple(tuple(r) for r in other)
        return NotImplemented

    def __hash__(self):
        return hash((self.cols, self._e))

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"

    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self._e for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic
    def transpose(self) -> Matrix:
        return Matrix(zip(*self._e), cols=self.rows) if self.rows else Matrix([], cols=0)

    T = property(transpose)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return Matrix(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._e],
            cols=other.cols,
        )

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self._e], cols=self.cols)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        return tuple(_clean(sum(a * b for a, b in zip(r, v))) for r in self._e)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix([[self._e[i][j] for j in cols] for i in rows], cols=len(cols))

    def stack(self, other: Matrix) -> Matrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return Matrix(self._e + other._e, cols=self.cols)

    # serialization: arrays of arrays of decimal strings
    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._e]

    @classmethod
    def from_json(cls, data: list[list[str]], cols: int | None = None) -> Matrix:
        return cls([[Fraction(x) for x in r] for r in data], cols=cols)


def as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix(m)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = reduce(gcd, v, 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def integer_scale(v: Sequence) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    return primitive(tuple(int(x * den) for x in v))


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    a = [[Fraction(x) for x in r] for r in as_matrix(m)]
    rows, cols = len(a), (m.cols if isinstance(m, Matrix) else len(a[0]))
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix(a, cols=cols), pivots


def rank(m) -> int:
    m = as_matrix(m) if not isinstance(m, Matrix) else m
    if m.rows == 0:
        return 0
    return _int_rank([list(r) for r in m]) if m.is_integral() else len(rref(m)[1])


def _int_rank(a: list[list[int]]) -> int:
    # fraction-free elimination; mutates a
    r = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [piv * x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def rank_of_vectors(vectors: Sequence[Sequence[int]]) -> int:
    if not vectors:
        return 0
    return _int_rank([list(v) for v in vectors])


def det(m: Matrix):
    """Exact determinant (int for integer input, else Fraction)."""
    m = as_matrix(m)
    if not m.is_square():
        raise LinAlgError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    if m.is_integral():
        return _bareiss(m.tolist())
    a = [[Fraction(x) for x in r] for r in m]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return _clean(d)


def _bareiss(a: list[list[int]]) -> int:
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Matrix) -> Matrix:
    """Exact inverse; raises LinAlgError when singular."""
    m = as_matrix(m)
    if not m.is_square():
        raise LinAlgError("inverse of a non-square matrix")
    n = m.rows
    aug = Matrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m)], cols=2 * n)
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise LinAlgError("singular matrix")
    return Matrix([r[n:] for r in red], cols=n)


def kernel_basis(a: Matrix) -> Matrix:
    """Primitive integer basis of the null space of a full-row-rank matrix.

    Rows come from the reduced echelon form (one per free column), are scaled
    to primitive integer vectors and sorted lexicographically.
    """
    a = as_matrix(a)
    n = a.cols
    if a.rows == 0:
        return Matrix.identity(n)
    red, piv = rref(a)
    if len(piv) < a.rows:
        raise LinAlgError("rank deficient")
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i, f]
        basis.append(integer_scale(v))
    return Matrix(sorted(basis), cols=n)


# ---------------------------------------------------------------- normal forms


@dataclass(frozen=True)
class SmithDecomposition:
    U: Matrix
    S: Matrix
    V: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))


@dataclass(frozen=True)
class HermiteDecomposition:
    U: Matrix
    H: Matrix
    colperm: tuple[int, ...]

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.H[i, i] for i in range(self.H.rows))


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _add_row(a, src, dst, q):
    # row dst += q * row src
    if q:
        ra, rb = a[dst], a[src]
        for k in range(len(ra)):
            ra[k] += q * rb[k]


def _add_col(a, src, dst, q):
    if q:
        for r in a:
            r[dst] += q * r[src]


def smith_normal_form(b: Matrix) -> SmithDecomposition:
    """U·B·V = S with U, V unimodular and S diagonal with divisibility chain."""
    b = as_matrix(b)
    if not b.is_integral():
        raise TypeError("Smith normal form needs an integer matrix")
    rows, cols = b.shape
    a = b.tolist()
    u = Matrix.identity(rows).tolist()
    v = Matrix.identity(cols).tolist()

    def pick(t):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    for t in range(min(rows, cols)):
        while True:
            best = pick(t)
            if best is None:
                break
            _, i, j = best
            if i != t:
                _swap_rows(a, i, t)
                _swap_rows(u, i, t)
            if j != t:
                _swap_cols(a, j, t)
                _swap_cols(v, j, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = -(a[i][t] // p)
                _add_row(a, t, i, q)
                _add_row(u, t, i, q)
                dirty |= a[i][t] != 0
            for j in range(t + 1, cols):
                q = -(a[t][j] // p)
                _add_col(a, t, j, q)
                _add_col(v, t, j, q)
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            _add_row(a, bad[0], t, 1)
            _add_row(u, bad[0], t, 1)
        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(Matrix(u, cols=rows), Matrix(a, cols=cols), Matrix(v, cols=cols))


def hermite_normal_form(b: Matrix) -> HermiteDecomposition:
    """Row Hermite form U·(B·P) = H of a full-row-rank integer matrix.

    P moves columns without a pivot to the right (stable), so H is upper
    triangular with a positive diagonal; entries above each pivot are reduced
    into [0, pivot).
    """
    b = as_matrix(b)
    if not b.is_integral():
        raise TypeError("Hermite normal form needs an integer matrix")
    rows, cols = b.shape
    a = b.tolist()
    u = Matrix.identity(rows).tolist()
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [(abs(a[i][c]), i) for i in range(r, rows) if a[i][c]]
            if not nz:
                break
            _, p = min(nz)
            if p != r:
                _swap_rows(a, p, r)
                _swap_rows(u, p, r)
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = -(a[i][c] // a[r][c])
                    _add_row(a, r, i, q)
                    _add_row(u, r, i, q)
                    done &= a[i][c] == 0
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = -(a[i][c] // a[r][c])
            _add_row(a, r, i, q)
            _add_row(u, r, i, q)
        pivots.append(c)
        r += 1
    if r < rows:
        raise LinAlgError("rank deficient")
    perm = tuple(pivots + [j for j in range(cols) if j not in pivots])
    h = [[row[j] for j in perm] for row in a]
    return HermiteDecomposition(Matrix(u, cols=rows), Matrix(h, cols=cols), perm)


def is_unimodular(m: Matrix) -> bool:
    m = as_matrix(m)
    return m.is_square() and m.is_integral() and abs(det(m)) == 1


# ---------------------------------------------------------------- transforms


@dataclass(frozen=True)
class UnimodularTransform:
    """Monomial change of coordinates x = y^M.

    Row convention: ``x_j = prod_i y_i ** M[i][j]``, so the first ``d`` rows are
    the parameter directions and substituting turns ``x^a`` into
    ``y^(M a)``.  ``denominators[i]`` clears row ``i``.
    """

    M: Matrix
    d: int
    case: str = "ii"
    denominators: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.M.rows

    def exponents(self, a: Sequence[int]) -> tuple:
        return self.M.apply(a)

    def is_integral(self) -> bool:
        return all(x == 1 for x in self.denominators)

    def to_json(self) -> dict:
        return {"M": self.M.to_json(), "d": self.d, "case": self.case,
                "denominators": list(self.denominators)}


def _is_unit_triangular(m: Matrix) -> bool:
    k = m.rows
    if any(abs(m[i, i]) != 1 for i in range(k)):
        return False
    upper = all(m[i, j] == 0 for i in range(k) for j in range(i))
    lower = all(m[i, j] == 0 for i in range(k) for j in range(i + 1, k))
    return upper or lower


def _unit_completion(b: Matrix) -> list[int] | None:
    """Columns on which B has a ±1 minor, preferring triangular minors.

    The first (lexicographic) column set whose minor is triangular with ±1
    diagonal wins; otherwise the first set with determinant ±1.
    """
    from itertools import combinations

    fallback = None
    for cols in combinations(range(b.cols), b.rows):
        sub = b.submatrix(range(b.rows), cols)
        if _is_unit_triangular(sub):
            return list(cols)
        if fallback is None and abs(det(sub)) == 1:
            fallback = list(cols)
    return fallback


def _with_unit_rows(top: Matrix, cols: Sequence[int]) -> Matrix:
    n = top.cols
    rest = [j for j in range(n) if j not in cols]
    bottom = [[int(k == j) for k in range(n)] for j in rest]
    return Matrix(top.tolist() + bottom, cols=n)


def build_unimodular_transform(b: Matrix, n: int | None = None) -> UnimodularTransform:
    """Coordinate transform whose first rows span the row space of ``b``.

    Three cases, decided from the Smith form U·B·V = S:

    * U = I: M = V^-1, parameter rows scaled by the Smith diagonal.
    * U != I, diagonal of S all ones: M = E·V^-1 with E = U^-1 padded by I.
    * otherwise: top block D^-1·B from the Hermite diagonal, bottom [0 | I].

    When B has a ±1 maximal minor the completion rows of cases (i)/(ii) are
    replaced by unit rows on the complementary columns; the top block and
    |det| = 1 are unchanged and the layout matches the familiar
    ``[B; 0 I]`` shape.
    """
    b = as_matrix(b)
    n = b.cols if n is None else n
    if b.cols != n:
        raise ValueError("kernel basis width does not match n")
    d = b.rows
    if d == 0:
        return UnimodularTransform(Matrix.identity(n), 0, "ii", ())
    if rank(b) < d:
        raise LinAlgError("rank deficient")
    snf = smith_normal_form(b)
    diag = snf.diagonal
    u_is_id = snf.U == Matrix.identity(d)
    if u_is_id or all(s == 1 for s in diag):
        vinv = inverse(snf.V)
        if u_is_id:
            case = "i"
            m = vinv
            denoms = tuple(diag) + (1,) * (n - d)
            # B = S V^-1, so the parameter rows of V^-1 are B's rows over s_i.
        else:
            case = "ii"
            uinv = inverse(snf.U).tolist()
            e = Matrix(
                [uinv[i] + [0] * (n - d) for i in range(d)]
                + [[int(i == j) for j in range(n)] for i in range(d, n)],
                cols=n,
            )
            m = e @ vinv
            denoms = (1,) * n
        if all(s == 1 for s in diag):
            cols = _unit_completion(b)
            if cols is not None:
                m = _with_unit_rows(Matrix(m[:d], cols=n), cols)
        return UnimodularTransform(m, d, case, denoms)
    hnf = hermite_normal_form(b)
    dvals = hnf.diagonal
    top = [[Fraction(x, dvals[i]) for x in b[i]] for i in range(d)]
    m = _with_unit_rows(Matrix(top, cols=n), hnf.colperm[:d])
    return UnimodularTransform(m, d, "iii", tuple(dvals) + (1,) * (n - d))


def transform_from_tropisms(a: Matrix) -> UnimodularTransform:
    """Transform whose parameter rows are exactly the given tropism rows."""
    a = as_matrix(a)
    return build_unimodular_transform(a, a.cols)


def row_hermite_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical basis of the lattice spanned by integer rows.

    Row echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot); two generating sets span the same lattice iff
    their bases agree.
    """
    a = [list(v) for v in vectors if any(v)]
    n = len(a[0]) if a else 0
    r = 0
    pivots = []
    for c in range(n):
        if r == len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[r], a[p] = a[p], a[r]
            clean = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    clean = clean and not a[i][c]
            if clean:
                break
        if not a[r][c]:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [tuple(int(x) for x in row) for row in a[:r]]
