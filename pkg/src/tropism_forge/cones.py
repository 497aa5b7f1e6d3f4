"""Rational polyhedral cones in double description.

A :class:`Cone` keeps both its H-representation (the equations and
inequalities it was cut out by) and its generators (lineality basis plus
extreme rays), updated incrementally by the double-description kernel.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels
from .linalg import Matrix, integer_scale, primitive, rank_of_vectors, rref

Vector = tuple[int, ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class Cone:
    __slots__ = ("n", "lineality", "rays", "_zs", "_ncons", "equations", "inequalities", "_key")

    def __init__(self, n: int, lineality, rays, zs=None, ncons: int = 0,
                 equations: Sequence[Vector] = (), inequalities: Sequence[Vector] = ()):
        self.n = n
        self.lineality = tuple(lineality)
        self.rays = tuple(rays)
        self._zs = tuple(zs) if zs is not None else (0,) * len(self.rays)
        self._ncons = ncons
        self.equations = tuple(equations)
        self.inequalities = tuple(inequalities)
        self._key = None

    @classmethod
    def full(cls, n: int) -> Cone:
        return cls(n, [tuple(int(i == j) for j in range(n)) for i in range(n)], [])

    @classmethod
    def from_constraints(cls, n: int, equations=(), inequalities=()) -> Cone:
        return cls.full(n).cut(equations, inequalities)

    @classmethod
    def from_generators(cls, rays: Iterable[Sequence[int]], lineality: Iterable[Sequence[int]] = (),
                        n: int | None = None) -> Cone:
        """Cone spanned by generators; the H-representation comes from the dual cone."""
        rays = [tuple(r) for r in rays]
        lineality = [tuple(v) for v in lineality]
        if n is None:
            n = len((rays or lineality)[0])
        dual = cls.full(n).cut(lineality, rays)
        return cls.from_constraints(n, dual.lineality, dual.rays)

    # ---------------------------------------------------------------- cutting
    def cut(self, equations=(), inequalities=()) -> Cone:
        cons = [(tuple(h), True) for h in equations] + [(tuple(h), False) for h in inequalities]
        if not cons:
            return self
        lin, rays, zs, ncons = kernels.dd_intersect(
            self.lineality, self.rays, self._zs, self._ncons, cons
        )
        return Cone(self.n, lin, rays, zs, ncons,
                    self.equations + tuple(tuple(h) for h in equations),
                    self.inequalities + tuple(tuple(h) for h in inequalities))

    def intersect(self, other: Cone) -> Cone:
        return self.cut(other.equations, other.inequalities)

    # ---------------------------------------------------------------- queries
    @property
    def dim(self) -> int:
        return rank_of_vectors(list(self.lineality) + list(self.rays))

    def is_empty_interior(self) -> bool:
        return self.dim == 0

    def generators(self) -> list[Vector]:
        """Rays plus both orientations of the lineality basis."""
        return list(self.rays) + list(self.lineality) + [tuple(-x for x in v) for v in self.lineality]

    def contains(self, v: Sequence[int]) -> bool:
        """Membership via the H-representation."""
        return all(_dot(h, v) == 0 for h in self.equations) and all(
            _dot(h, v) >= 0 for h in self.inequalities
        )

    def contains_cone(self, other: Cone) -> bool:
        return all(self.contains(g) for g in other.generators())

    def interior_point(self) -> Vector:
        """A point of the relative interior: sum of the rays and the lineality basis."""
        gens = list(self.rays) + list(self.lineality)
        if not gens:
            return (0,) * self.n
        return primitive(tuple(sum(c) for c in zip(*gens)))

    def span_contains(self, v: Sequence[int]) -> bool:
        gens = list(self.lineality) + list(self.rays)
        return rank_of_vectors(gens + [tuple(v)]) == rank_of_vectors(gens)

    # ---------------------------------------------------------------- canonical form
    def canonical(self) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
        """(lineality basis in reduced echelon form, sorted rays reduced modulo it)."""
        if self._key is None:
            if self.lineality:
                red, piv = rref(Matrix(self.lineality, cols=self.n))
                lin_rows = [tuple(r) for r in red][: len(piv)]
                lin = tuple(sorted(integer_scale(r) for r in lin_rows))
                rays = []
                for r in self.rays:
                    v = [Fraction(x) for x in r]
                    for row, p in zip(lin_rows, piv):
                        if v[p]:
                            f = v[p]
                            v = [a - f * b for a, b in zip(v, row)]
                    rays.append(integer_scale(v))
                self._key = (lin, tuple(sorted(rays)))
            else:
                self._key = ((), tuple(sorted(self.rays)))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Cone) and self.n == other.n and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def sort_key(self):
        lin, rays = self.canonical()
        return (-self.dim, rays, lin)

    def permuted(self, perm: Sequence[int]) -> Cone:
        """Image under the coordinate permutation sending index i to perm[i]."""

        def act(v):
            w = [0] * self.n
            for i, x in enumerate(v):
                w[perm[i]] = x
            return tuple(w)

        return Cone(self.n, [act(v) for v in self.lineality], [act(r) for r in self.rays],
                    self._zs, self._ncons,
                    [act(h) for h in self.equations], [act(h) for h in self.inequalities])

    def to_json(self) -> dict:
        lin, rays = self.canonical()
        return {"dim": self.dim, "rays": [list(r) for r in rays], "lineality": [list(v) for v in lin]}

    def __repr__(self):
        lin, rays = self.canonical()
        s = f"Cone(dim={self.dim}, rays={[list(r) for r in rays]}"
        if lin:
            s += f", lineality={[list(v) for v in lin]}"
        return s + ")"
