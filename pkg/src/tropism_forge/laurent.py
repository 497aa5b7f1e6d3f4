"""Sparse multivariate Laurent polynomials and polynomial systems.

A polynomial is a mapping from integer exponent tuples (negative entries
allowed) to nonzero coefficients.  Coefficients are :class:`Cyclotomic`
values in the exact domain or Python ``complex`` in the floating domain.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .cyclotomic import Cyclotomic, ComplexDomain, CyclotomicDomain, format_cyclotomic
from .linalg import UnimodularTransform

Exponent = tuple[int, ...]


class ParseError(ValueError):
    """Syntax error in a polynomial system file."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class NonIntegerExponentError(ArithmeticError):
    """A monomial transform produced a fractional exponent."""

    def __init__(self, exponent):
        super().__init__(f"non-integer exponent {tuple(str(e) for e in exponent)}")
        self.exponent = exponent


class LaurentPolynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict[Exponent, object] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if e in t:
                c = t[e] + c
            t[e] = c
        self.terms = {e: c for e, c in t.items() if c}

    @classmethod
    def constant(cls, nvars: int, c) -> LaurentPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], c=1) -> LaurentPolynomial:
        return cls(nvars, {tuple(exp): c})

    @classmethod
    def variable(cls, nvars: int, i: int, one=1) -> LaurentPolynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): one})

    # structure
    def support(self) -> set[Exponent]:
        return set(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return not other
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms)))

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # arithmetic
    def _check(self, other: LaurentPolynomial):
        if other.nvars != self.nvars:
            raise ValueError("polynomials in different numbers of variables")

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(self.nvars, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return LaurentPolynomial(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return LaurentPolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int) and len(self.terms) == 1:
                (e, c), = self.terms.items()
                return LaurentPolynomial(self.nvars, {tuple(k * x for x in e): c**k})
            raise ValueError("polynomial powers must be nonnegative integers")
        one = next(iter(self.terms.values())) ** 0 if self.terms else 1
        r = LaurentPolynomial.constant(self.nvars, one)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def shift(self, exp: Sequence[int]) -> LaurentPolynomial:
        """Multiply by the monomial x^exp."""
        return LaurentPolynomial(
            self.nvars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}
        )

    def map_coefficients(self, f) -> LaurentPolynomial:
        return LaurentPolynomial(self.nvars, {e: f(c) for e, c in self.terms.items()})

    # faces
    def initial_form(self, v: Sequence[int]) -> LaurentPolynomial:
        """Terms whose exponents minimize the inner product with v."""
        from .polytopes import initial_support

        keep = initial_support(self.terms, v)
        return LaurentPolynomial(self.nvars, {e: self.terms[e] for e in keep})

    # substitution and evaluation
    def substitute(self, transform: UnimodularTransform | Sequence[Sequence]) -> LaurentPolynomial:
        """Apply x = y^M: the term x^a becomes y^(M a)."""
        return substitute_monomial_transform(self, transform)

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    def __call__(self, *point):
        return evaluate(self, point)

    def __repr__(self):
        return f"LaurentPolynomial({self.nvars}, {format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def substitute_monomial_transform(f: LaurentPolynomial, transform) -> LaurentPolynomial:
    m = transform.M if isinstance(transform, UnimodularTransform) else transform
    rows = [tuple(r) for r in m]
    if len(rows) != f.nvars or any(len(r) != f.nvars for r in rows):
        raise ValueError("transform dimension does not match the polynomial")
    out: dict[Exponent, object] = {}
    for a, c in f.terms.items():
        e = []
        for r in rows:
            s = sum(x * y for x, y in zip(r, a))
            if isinstance(s, Fraction):
                if s.denominator != 1:
                    raise NonIntegerExponentError([sum(x * y for x, y in zip(rr, a)) for rr in rows])
                s = s.numerator
            e.append(s)
        e = tuple(e)
        out[e] = out[e] + c if e in out else c
    return LaurentPolynomial(f.nvars, out)


def _power(x, k: int):
    if k == 0:
        return x**0 if not isinstance(x, (int, Fraction)) else 1
    if k < 0 and not x:
        raise ZeroDivisionError("zero coordinate raised to a negative power")
    return x**k


def evaluate(f: LaurentPolynomial, point: Sequence):
    if len(point) != f.nvars:
        raise ValueError(f"point has {len(point)} coordinates, expected {f.nvars}")
    total = 0
    for e, c in f.terms.items():
        v = c
        for x, k in zip(point, e):
            if k:
                v = v * _power(x, k)
        total = total + v
    return total


@dataclass(frozen=True)
class PolySystem:
    nvars: int
    polys: tuple[LaurentPolynomial, ...]
    names: tuple[str, ...] = ()
    root_order: int = 1

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(self.nvars)))
        if len(self.names) != self.nvars:
            raise ValueError("number of variable names does not match nvars")
        for p in self.polys:
            if p.nvars != self.nvars:
                raise ValueError("all polynomials must share nvars")

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def supports(self) -> list[set[Exponent]]:
        return [p.support() for p in self.polys]

    def evaluate(self, point: Sequence) -> list:
        return evaluate_system(self, point)

    def with_polys(self, polys: Iterable[LaurentPolynomial]) -> PolySystem:
        return PolySystem(self.nvars, tuple(polys), self.names, self.root_order)

    def substitute(self, transform) -> PolySystem:
        return self.with_polys(p.substitute(transform) for p in self.polys)

    def __str__(self):
        return format_system(self)

    def to_json(self) -> dict:
        return system_to_json(self)


def evaluate_system(system: PolySystem, point: Sequence) -> list:
    return [evaluate(p, point) for p in system.polys]


def cyclic_system(n: int, domain=None) -> PolySystem:
    """The cyclic n-roots benchmark system."""
    if n < 2:
        raise ValueError("cyclic n-roots needs n >= 2")
    one = (domain or CyclotomicDomain(1)).one()
    polys = []
    for k in range(1, n):
        terms = {}
        for j in range(n):
            e = [0] * n
            for t in range(k):
                e[(j + t) % n] = 1
            terms[tuple(e)] = one
        polys.append(LaurentPolynomial(n, terms))
    polys.append(LaurentPolynomial(n, {(1,) * n: one, (0,) * n: -one}))
    return PolySystem(n, tuple(polys))


# ---------------------------------------------------------------- printing


def format_coefficient(c) -> str:
    if isinstance(c, Cyclotomic):
        return format_cyclotomic(c)
    if isinstance(c, complex):
        re_, im = c.real, c.imag
        if im == 0:
            return repr(re_)
        if re_ == 0:
            return f"{im!r}*i"
        return f"{re_!r}{'+' if im >= 0 else '-'}{abs(im)!r}*i"
    if isinstance(c, Fraction):
        return str(c) if c.denominator != 1 else str(c.numerator)
    return str(c)


def _monomial(e: Exponent, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_polynomial(f: LaurentPolynomial, names: Sequence[str] | None = None) -> str:
    names = names or [f"x{i}" for i in range(f.nvars)]
    if not f.terms:
        return "0"
    out = ""
    for e, c in f.sorted_terms():
        mono = _monomial(e, names)
        cs = format_coefficient(c)
        compound = any(ch in cs[1:] for ch in "+-")
        neg = cs.startswith("-") and not compound
        if neg:
            cs = cs[1:]
        if compound:
            cs = f"({cs})"
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if not out:
            out = f"-{body}" if neg else body
        else:
            out += f" - {body}" if neg else f" + {body}"
    return out


def _lifter(order: int):
    def lift(c):
        if isinstance(c, Cyclotomic) and c.m != order and order % c.m == 0:
            return c._lift(order)
        return c

    return lift


def format_system(system: PolySystem) -> str:
    lines = []
    default = tuple(f"x{i}" for i in range(system.nvars))
    if system.names != default:
        lines.append("vars: " + ", ".join(system.names) + ";")
    if system.root_order != 1:
        lines.append(f"root-order: {system.root_order};")
    lift = _lifter(system.root_order)
    for p in system.polys:
        lines.append(format_polynomial(p.map_coefficients(lift), system.names) + ";")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^();]))"
)


class _Parser:
    def __init__(self, text: str, names, index, nvars, domain, line_of):
        self.toks = []
        self.names = names
        self.index = index
        self.nvars = nvars
        self.domain = domain
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                ln, col = line_of(pos)
                raise ParseError(f"unexpected character {text[pos]!r}", ln, col)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0
        self.line_of = line_of
        self.end = len(text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.end)

    def error(self, msg, tok=None):
        ln, col = self.line_of((tok or self.peek())[2])
        raise ParseError(msg, ln, col)

    def take(self, val=None):
        tok = self.peek()
        if tok[0] is None or (val is not None and tok[1] != val):
            self.error(f"expected {val!r}" if val else "unexpected end of input")
        self.i += 1
        return tok

    def const(self, x):
        return LaurentPolynomial.constant(self.nvars, self.domain.coerce(x))

    def expr(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            acc = self.term()
            if op == "-":
                acc = -acc
        else:
            acc = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                acc = acc * self.factor()
            elif val == "/":
                tok = self.take()
                d = self.factor()
                if len(d.terms) != 1 or any(next(iter(d.terms))):
                    self.error("division only by nonzero constants", tok)
                (c,) = d.terms.values()
                acc = acc * (1 / c)
            elif val == "(":
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] in ("-", "+"):
                sign = -1 if self.take()[1] == "-" else 1
            kind, val, pos = self.peek()
            if kind != "num" or not val.isdigit():
                self.error("malformed exponent")
            self.take()
            k = sign * int(val)
            if k < 0 and len(base.terms) != 1:
                self.error("negative power of a non-monomial")
            base = base**k
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            if isinstance(self.domain, ComplexDomain):
                return self.const(float(val))
            return self.const(Fraction(val))
        if kind == "name":
            self.take()
            if val in self.index:
                return LaurentPolynomial.variable(self.nvars, self.index[val], self.domain.one())
            if val == "i":
                return self.const(self.domain.imaginary_unit())
            if val == "u" and isinstance(self.domain, CyclotomicDomain):
                return self.const(self.domain.generator())
            self.error(f"unknown variable {val!r}", (kind, val, pos))
        if val == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        self.error(f"unexpected token {val!r}" if val else "unexpected end of input")


_HEADER = re.compile(r"^\s*(vars|root-order)\s*:(.*)$", re.S)
_XVAR = re.compile(r"\bx(\d+)\b")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.split("\n"))


def parse_system(text: str, domain=None) -> PolySystem:
    """Parse ``;``-terminated polynomials, with optional header statements."""
    body = _strip_comments(text)
    # split into statements, keeping offsets for error positions
    stmts = []
    start = 0
    for i, ch in enumerate(body):
        if ch == ";":
            stmts.append((start, body[start:i]))
            start = i + 1
    tail = body[start:]

    def line_of(off):
        before = body[:off]
        return before.count("\n") + 1, off - (before.rfind("\n") + 1) + 1

    if tail.strip():
        ln, col = line_of(start + len(tail) - len(tail.lstrip()))
        raise ParseError("statement not terminated by ';'", ln, col)
    names = None
    order = None
    polys_src = []
    for off, s in stmts:
        m = _HEADER.match(s)
        if m:
            key, val = m.group(1), m.group(2).strip()
            if key == "vars":
                names = tuple(v.strip() for v in val.split(",") if v.strip())
                if not names or len(set(names)) != len(names):
                    raise ParseError("bad variable declaration", *line_of(off))
            else:
                if not val.isdigit() or int(val) < 1:
                    raise ParseError("root-order must be a positive integer", *line_of(off))
                order = int(val)
            continue
        if not s.strip():
            raise ParseError("empty statement", *line_of(off))
        polys_src.append((off, s))
    if not polys_src:
        raise ParseError("empty system")
    if domain is None:
        domain = CyclotomicDomain(order or 1)
    elif order and isinstance(domain, CyclotomicDomain) and domain.order != order:
        domain = CyclotomicDomain(order)
    if names is None:
        idx = [int(k) for _, s in polys_src for k in _XVAR.findall(s)]
        nvars = max(idx) + 1 if idx else 1
        names = tuple(f"x{i}" for i in range(nvars))
    index = {n: i for i, n in enumerate(names)}
    polys = []
    for off, s in polys_src:
        p = _Parser(" " * off + s, names, index, len(names), domain, line_of)
        p.i = 0
        f = p.expr()
        if p.peek()[0] is not None:
            p.error(f"unexpected token {p.peek()[1]!r}")
        polys.append(f)
    order = order or (domain.order if isinstance(domain, CyclotomicDomain) else 1)
    for f in polys:
        for c in f.terms.values():
            if isinstance(c, Cyclotomic):
                order = order * c.m // gcd(order, c.m)
    if isinstance(domain, CyclotomicDomain):
        lift = _lifter(order)
        polys = [f.map_coefficients(lift) for f in polys]
    return PolySystem(len(names), tuple(polys), names, order)


def parse_polynomial(text: str, nvars: int | None = None, domain=None, names=None) -> LaurentPolynomial:
    header = f"vars: {', '.join(names)};\n" if names else ""
    sys_ = parse_system(header + text.rstrip().rstrip(";") + ";", domain)
    f = sys_.polys[0]
    if nvars is not None and nvars > f.nvars and not names:
        f = LaurentPolynomial(nvars, {e + (0,) * (nvars - f.nvars): c for e, c in f.terms.items()})
    return f


# ---------------------------------------------------------------- JSON


def coefficient_to_json(c) -> str:
    return format_coefficient(c)


def coefficient_from_json(s: str, domain=None):
    domain = domain or CyclotomicDomain(1)
    f = parse_polynomial(s, domain=domain, names=["_"])
    if not f.terms:
        return domain.zero()
    (c,) = f.terms.values()
    return c


def system_to_json(system: PolySystem) -> dict:
    return {
        "nvars": system.nvars,
        "names": list(system.names),
        "root_order": system.root_order,
        "polys": [
            {"terms": [{"exp": list(e), "coef": coefficient_to_json(c)} for e, c in p.sorted_terms()]}
            for p in system.polys
        ],
    }


def system_from_json(data: dict, domain=None) -> PolySystem:
    n = data["nvars"]
    order = data.get("root_order", 1)
    domain = domain or CyclotomicDomain(order)
    polys = tuple(
        LaurentPolynomial(n, [(tuple(t["exp"]), coefficient_from_json(t["coef"], domain)) for t in p["terms"]])
        for p in data["polys"]
    )
    return PolySystem(n, polys, tuple(data.get("names") or ()), order)


ILLUSTRATIVE_TEXT = """\
vars: x, y, z;
(y - x^2)*(x^2 + y^2 + z^2 - 1)*(x - 0.5);
(z - x^3)*(x^2 + y^2 + z^2 - 1)*(y - 0.5);
(y - x^2)*(z - x^3)*(x^2 + y^2 + z^2 - 1)*(z - 0.5);
"""


def illustrative_system(domain=None) -> PolySystem:
    """The sphere, twisted cubic and three points, intersected with cubic factors."""
    return parse_system(ILLUSTRATIVE_TEXT, domain)


def builtin_system(spec: str, domain=None) -> PolySystem:
    """``cyclic:n`` or ``illus3``."""
    if spec == "illus3":
        return illustrative_system(domain)
    if spec.startswith("cyclic:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad cyclic size in {spec!r}") from None
        return cyclic_system(n, domain)
    raise ValueError(f"unknown builtin system {spec!r}")


def substitute_parametrization(f: LaurentPolynomial, coefficients: Sequence, exponents: Sequence[Sequence],
                               nparams: int) -> LaurentPolynomial:
    """f evaluated at x_j = coefficients[j] * t^exponents[j], as a Laurent polynomial in t.

    Exponents may be rational; the result is then keyed by rational tuples.
    """
    out: dict = {}
    for a, c in f.terms.items():
        v = c
        e = [0] * nparams
        for j, k in enumerate(a):
            if k:
                v = v * _power(coefficients[j], k)
                for i in range(nparams):
                    e[i] += k * exponents[j][i]
        key = tuple(int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in e)
        out[key] = out[key] + v if key in out else v
    return LaurentPolynomial(nparams, out)
