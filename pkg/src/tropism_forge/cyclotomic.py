"""Exact arithmetic in cyclotomic fields Q(u), u a primitive m-th root of unity.

Elements are rational coordinate vectors on the power basis 1, u, ..., u^(phi(m)-1),
reduced modulo the m-th cyclotomic polynomial, so equality and zero tests are
exact.  Elements of different orders are combined in the field of order
lcm(m1, m2).
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]  # den is monic
        if c:
            q[k - dd] = c
            for i, b in enumerate(den):
                num[k - dd + i] -= c * b
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


def _reduce(coeffs: list, m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, deg - 1, -1):
        a = c[k]
        if a:
            for i in range(deg):
                c[k - deg + i] -= a * phi[i]
        c[k] = 0
    c = c[:deg] + [0] * (deg - len(c))
    return tuple(Fraction(x) for x in c)


class Cyclotomic:
    """Element of Q(u_m)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs: Iterable = (0,), *, reduced: bool = False):
        self.m = m
        self.c = tuple(coeffs) if reduced else _reduce(list(coeffs), m)

    # constructors
    @classmethod
    def rational(cls, q, m: int = 1) -> Cyclotomic:
        return cls(m, [Fraction(q)])

    @classmethod
    def root(cls, k: int, m: int) -> Cyclotomic:
        """u_m ** k."""
        k %= m
        return cls(m, [0] * k + [1])

    @classmethod
    def imaginary_unit(cls) -> Cyclotomic:
        return cls.root(1, 4)

    # coercion
    def _lift(self, m: int) -> Cyclotomic:
        if m == self.m:
            return self
        if m % self.m:
            raise ValueError("can only lift to a multiple of the order")
        s = m // self.m
        big = [Fraction(0)] * (s * (len(self.c) - 1) + 1)
        for k, a in enumerate(self.c):
            big[k * s] = a
        return Cyclotomic(m, big)

    @staticmethod
    def _coerce(x) -> Cyclotomic | None:
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Rational)) and not isinstance(x, bool):
            return Cyclotomic(1, [Fraction(x)], reduced=True)
        return None

    def _pair(self, other):
        o = self._coerce(other)
        if o is None:
            return None, None
        if o.m == self.m:
            return self, o
        if o.m == 1 and len(o.c) == 1:
            # rational: promote without a reduction pass
            return self, Cyclotomic(self.m, (o.c[0],) + (Fraction(0),) * (len(self.c) - 1), reduced=True)
        if self.m == 1 and len(self.c) == 1:
            return Cyclotomic(o.m, (self.c[0],) + (Fraction(0),) * (len(o.c) - 1), reduced=True), o
        m = self.m * o.m // gcd(self.m, o.m)
        return self._lift(m), o._lift(m)

    # arithmetic; mixing with float or complex gives a complex result
    def __add__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) + other
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, tuple(x + y for x, y in zip(a.c, b.c)), reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, tuple(-x for x in self.c), reduced=True)

    def __sub__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) - other
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, tuple(x - y for x, y in zip(a.c, b.c)), reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) * other
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if len(b.c) == 1 or not any(b.c[1:]):
            s = b.c[0]
            return Cyclotomic(a.m, tuple(x * s for x in a.c), reduced=True)
        if not any(a.c[1:]):
            s = a.c[0]
            return Cyclotomic(a.m, tuple(x * s for x in b.c), reduced=True)
        prod = [Fraction(0)] * (len(a.c) + len(b.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.m, prod)

    __rmul__ = __mul__

    def conjugate(self) -> Cyclotomic:
        """Complex conjugation u -> u^(m-1)."""
        return self.galois(-1)

    def galois(self, k: int) -> Cyclotomic:
        """Automorphism u -> u^k, gcd(k, m) = 1."""
        if gcd(k, self.m) != 1:
            raise ValueError("exponent must be a unit modulo the order")
        out = [Fraction(0)] * self.m
        for i, a in enumerate(self.c):
            out[(i * k) % self.m] += a
        return Cyclotomic(self.m, out)

    def simplify(self) -> Cyclotomic:
        """The same number written in the field of smallest possible order."""
        r = self.rational_value()
        if r is not None:
            return Cyclotomic(1, (r,), reduced=True)
        from .linalg import Matrix, rref

        m = self.m
        width = len(self.c)
        for d in range(2, m):
            if m % d:
                continue
            k = euler_phi(d)
            basis = [Cyclotomic.root(i * (m // d), m).c for i in range(k)]
            cols = [list(b) + [Fraction(0)] * (width - len(b)) for b in basis]
            aug = Matrix([[cols[i][r] for i in range(k)] + [self.c[r]] for r in range(width)], cols=k + 1)
            red, piv = rref(aug)
            if k in piv:
                continue
            coeffs = [Fraction(0)] * k
            for row, p in zip(red, piv):
                coeffs[p] = Fraction(row[k])
            return Cyclotomic(d, coeffs)
        return self

    def norm(self) -> Fraction:
        """Field norm down to Q: product of all Galois conjugates."""
        r = Cyclotomic(self.m, (Fraction(1),), reduced=False)
        for k in range(1, self.m + 1):
            if gcd(k, self.m) == 1:
                r = r * self.galois(k)
        if any(r.c[1:]):
            raise ArithmeticError("norm is not rational")
        return r.c[0]

    def inverse(self) -> Cyclotomic:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not any(self.c[1:]):
            return Cyclotomic(self.m, (1 / self.c[0],) + self.c[1:], reduced=True)
        # x^-1 = (product of the other conjugates) / norm
        rest = Cyclotomic(self.m, (Fraction(1),))
        for k in range(2, self.m + 1):
            if gcd(k, self.m) == 1:
                rest = rest * self.galois(k)
        n = (self * rest).c[0]
        return rest * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) / other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        r = Cyclotomic(self.m, (Fraction(1),) + (Fraction(0),) * (len(self.c) - 1), reduced=True)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    # comparisons and conversion
    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.c == b.c

    def __hash__(self):
        # rationals hash like Fraction; other values only agree within one order
        r = self.rational_value()
        if r is not None:
            return hash(r)
        return hash((self.m, self.c))

    def rational_value(self) -> Fraction | None:
        if not any(self.c[1:]):
            return self.c[0]
        return None

    def root_of_unity_exponent(self) -> int | None:
        """k with self == u_m^k, or None."""
        for k in range(self.m):
            if self == Cyclotomic.root(k, self.m):
                return k
        return None

    def __complex__(self):
        w = cmath.exp(2j * cmath.pi / self.m)
        return complex(sum(float(a) * w**k for k, a in enumerate(self.c)))

    def sort_key(self):
        return (self.m, self.c)

    def __repr__(self):
        return f"Cyclotomic({self.m}, {[str(x) for x in self.c]})"

    def __str__(self):
        return format_cyclotomic(self)


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _unit_power(x: Cyclotomic, gen: str) -> str | None:
    if x.m <= 2:
        return None
    for sign, y in (("", x), ("-", -x)):
        k = y.root_of_unity_exponent()
        if k is not None:
            return sign + ("1" if k == 0 else gen if k == 1 else f"{gen}^{k}")
    return None


def format_cyclotomic(x: Cyclotomic, gen: str = "u") -> str:
    """Power-basis text; roots of unity (up to sign) print as powers of u."""
    unit = _unit_power(x, gen)
    if unit is not None:
        return unit
    parts = []
    for k, a in enumerate(x.c):
        if not a:
            continue
        if k == 0:
            parts.append(_fmt_rational(a))
            continue
        mono = gen if k == 1 else f"{gen}^{k}"
        if a == 1:
            parts.append(mono)
        elif a == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{_fmt_rational(a)}*{mono}")
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += p if p.startswith("-") else "+" + p
    return s


class CyclotomicDomain:
    """Exact coefficient domain of a fixed root order."""

    exact = True

    def __init__(self, order: int = 1):
        if order < 1:
            raise ValueError("root order must be positive")
        self.order = order

    def __repr__(self):
        return f"CyclotomicDomain({self.order})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicDomain) and other.order == self.order

    def __hash__(self):
        return hash(("cyc", self.order))

    def coerce(self, x) -> Cyclotomic:
        if isinstance(x, Cyclotomic):
            if self.order % x.m == 0:
                return x._lift(self.order)
            return x
        if isinstance(x, complex) or isinstance(x, float):
            raise TypeError("floating-point value in an exact domain")
        return Cyclotomic(self.order, [Fraction(x)])

    def one(self) -> Cyclotomic:
        return self.coerce(1)

    def zero(self) -> Cyclotomic:
        return self.coerce(0)

    def generator(self) -> Cyclotomic:
        return Cyclotomic.root(1, self.order)

    def roots_of_unity(self) -> list[Cyclotomic]:
        return [Cyclotomic.root(k, self.order) for k in range(self.order)]

    def is_zero(self, x) -> bool:
        return not x

    def imaginary_unit(self) -> Cyclotomic:
        return Cyclotomic.imaginary_unit()


class ComplexDomain:
    """Double-precision complex numbers with a zero tolerance."""

    exact = False

    def __init__(self, tol: float = 1e-10):
        self.tol = tol

    def __repr__(self):
        return f"ComplexDomain(tol={self.tol})"

    def coerce(self, x) -> complex:
        return complex(x)

    def one(self) -> complex:
        return 1 + 0j

    def zero(self) -> complex:
        return 0j

    def is_zero(self, x) -> bool:
        return abs(complex(x)) <= self.tol

    def imaginary_unit(self) -> complex:
        return 1j


def is_exact_zero(x) -> bool:
    """Exact zero test for any supported coefficient type (complex: == 0)."""
    return not x


def lift_to_order(x, m: int) -> Cyclotomic:
    """Rewrite x in Q(u_m); the order of x must divide m."""
    c = Cyclotomic._coerce(x)
    if c is None:
        raise TypeError(f"not an exact coefficient: {x!r}")
    if c.m == m:
        return c
    c = c.simplify()
    if m % c.m:
        raise ValueError(f"an element of order {c.m} does not live in Q(u_{m})")
    return c._lift(m)
