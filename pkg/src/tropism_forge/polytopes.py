"""Newton polytopes, initial forms and pretropism cones.

Faces are selected by MINIMAL inner product throughout: ``in_v(A)`` is the
subset of ``A`` where ``<a, v>`` is smallest.

Pretropisms are found by intersecting the edge normal cones of all Newton
polytopes, one polytope at a time, discarding every partial intersection
whose dimension has already dropped below the requested ``d``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .cones import Cone
from .laurent import LaurentPolynomial, PolySystem
from .linalg import primitive, rank_of_vectors

log = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def initial_support(points: Iterable[Sequence[int]], v: Sequence[int]) -> set[Vector]:
    """Points of the support minimizing the inner product with v."""
    if not any(v):
        raise ValueError("initial support needs a nonzero vector")
    pts = [tuple(a) for a in points]
    if not pts:
        return set()
    vals = [_dot(a, v) for a in pts]
    low = min(vals)
    return {a for a, x in zip(pts, vals) if x == low}


def initial_form(f: LaurentPolynomial, v: Sequence[int]) -> LaurentPolynomial:
    return f.initial_form(v)


def nested_initial_form(f: LaurentPolynomial, vs: Sequence[Sequence[int]]) -> LaurentPolynomial:
    """Apply the initial forms in list order: vs[0] first, then vs[1] on the result."""
    for v in vs:
        f = f.initial_form(v)
    return f


def initial_form_system(system: PolySystem, vs: Sequence[Sequence[int]]) -> PolySystem:
    return system.with_polys(nested_initial_form(f, vs) for f in system.polys)


# ---------------------------------------------------------------- polytopes


@dataclass(frozen=True)
class Edge:
    a: Vector
    b: Vector

    @property
    def direction(self) -> Vector:
        return primitive(tuple(y - x for x, y in zip(self.a, self.b)))


@dataclass(frozen=True)
class NewtonPolytope:
    points: tuple[Vector, ...]
    vertices: tuple[Vector, ...]
    edges: tuple[Edge, ...]

    @property
    def dim_ambient(self) -> int:
        return len(self.points[0])

    def edge_normal_cone(self, edge: Edge) -> Cone:
        """Closed cone of v with ``{a, b}`` inside ``in_v`` (inner normals)."""
        eq, ineqs = _edge_constraints(self.vertices, edge.a, edge.b)
        return Cone.from_constraints(self.dim_ambient, [eq], ineqs)


def _edge_constraints(vertices, p, q):
    eq = tuple(x - y for x, y in zip(p, q))
    ineqs = [tuple(x - y for x, y in zip(a, p)) for a in vertices if a != p and a != q]
    return eq, ineqs


def newton_polytope(f: LaurentPolynomial | Iterable[Sequence[int]]) -> NewtonPolytope:
    """Vertices and edges of the convex hull of a support, computed exactly.

    A point is a vertex when its normal cone is full-dimensional; a pair of
    vertices is an edge when its normal cone has codimension one.
    """
    pts = sorted(set(tuple(a) for a in (f.terms if isinstance(f, LaurentPolynomial) else f)))
    if not pts:
        raise ValueError("Newton polytope of the zero polynomial")
    n = len(pts[0])
    if len(pts) == 1:
        return NewtonPolytope(tuple(pts), tuple(pts), ())
    vertices = []
    for p in pts:
        c = Cone.from_constraints(n, (), [tuple(x - y for x, y in zip(a, p)) for a in pts if a != p])
        if c.dim == n:
            vertices.append(p)
    edges = []
    for p, q in combinations(vertices, 2):
        eq, ineqs = _edge_constraints(vertices, p, q)
        if Cone.from_constraints(n, [eq], ineqs).dim == n - 1:
            edges.append(Edge(p, q))
    return NewtonPolytope(tuple(pts), tuple(vertices), tuple(edges))


# ---------------------------------------------------------------- pretropisms


@dataclass(frozen=True)
class PretropismRecord:
    cone: Cone
    certificates: tuple[frozenset, ...] = field(compare=False)

    @property
    def rays(self) -> tuple[Vector, ...]:
        return self.cone.canonical()[1]

    @property
    def dim(self) -> int:
        return self.cone.dim

    def to_json(self) -> dict:
        d = self.cone.to_json()
        d["certificates"] = [sorted(list(a) for a in c) for c in self.certificates]
        return d


def _supports(system) -> list[list[Vector]]:
    if isinstance(system, PolySystem):
        return [sorted(p.terms) for p in system.polys]
    return [sorted(set(tuple(a) for a in s)) for s in system]


def is_pretropism(supports, v: Sequence[int]) -> bool:
    """Every support has at least two points minimizing <a, v>."""
    return all(len(initial_support(s, v)) >= 2 for s in _supports(supports))


def _has_positive_first(c: Cone) -> bool:
    if any(v[0] != 0 for v in c.lineality):
        return True
    return any(r[0] > 0 for r in c.rays)


def pretropism_cones(system, d: int = 1, positive_first: bool = True) -> list[PretropismRecord]:
    """Maximal cones of pretropisms of dimension at least ``d``.

    ``system`` is a :class:`PolySystem` or a list of supports.  With
    ``positive_first`` only cones containing a vector with positive first
    coordinate are kept.  The result is sorted by canonical ray matrix.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    sups = _supports(system)
    if not sups:
        return []
    n = len(sups[0][0])
    if any(len(s) < 2 for s in sups):
        return []
    polys = [newton_polytope(s) for s in sups]
    edge_cons = [[_edge_constraints(P.vertices, e.a, e.b) for e in P.edges] for P in polys]
    order = sorted(range(len(polys)), key=lambda i: (len(edge_cons[i]), i))
    nodes = [Cone.full(n)]
    for i in order:
        found: dict = {}
        packed = [[(eq, True)] + [(h, False) for h in ineqs] for eq, ineqs in edge_cons[i]]
        for c in nodes:
            for (eq, ineqs), cons in zip(edge_cons[i], packed):
                lin, rays, zs, ncons = kernels.dd_intersect(c.lineality, c.rays, c._zs, c._ncons, cons)
                # rank <= number of generators: cheap rejection before the exact rank
                if len(lin) + len(rays) < d:
                    continue
                if len(lin) < d and rank_of_vectors(lin + rays) < d:
                    continue
                x = Cone(n, lin, rays, zs, ncons, c.equations + (eq,), c.inequalities + tuple(ineqs))
                found.setdefault(x.canonical(), x)
        nodes = list(found.values())
        log.debug("polytope %d: %d cones", i, len(nodes))
        if not nodes:
            return []
    nodes.sort(key=lambda c: (-c.dim, c.canonical()))
    maximal: list[Cone] = []
    for c in nodes:
        if not any(m.contains_cone(c) for m in maximal):
            maximal.append(c)
    if positive_first:
        maximal = [c for c in maximal if _has_positive_first(c)]
    maximal.sort(key=lambda c: (c.canonical()[1], c.canonical()[0]))
    out = []
    for c in maximal:
        w = c.interior_point()
        out.append(PretropismRecord(c, tuple(frozenset(initial_support(s, w)) for s in sups)))
    return out


# ---------------------------------------------------------------- symmetry


def cyclic_shift(n: int, k: int = 1) -> tuple[int, ...]:
    """Permutation sending index i to i + k modulo n."""
    return tuple((i + k) % n for i in range(n))


def _check_perm(perm: Sequence[int], n: int):
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{list(perm)} is not a permutation of 0..{n - 1}")


def group_elements(generator: Sequence[int]) -> list[tuple[int, ...]]:
    """All powers of a permutation (identity first)."""
    n = len(generator)
    _check_perm(generator, n)
    ident = tuple(range(n))
    elems = [ident]
    g = tuple(generator)
    cur = g
    while cur != ident:
        elems.append(cur)
        cur = tuple(g[cur[i]] for i in range(n))
    return elems


@dataclass(frozen=True)
class Orbit:
    representative: PretropismRecord
    members: tuple[PretropismRecord, ...]
    size: int


def orbit_group(records: Sequence[PretropismRecord], generator: Sequence[int]) -> list[Orbit]:
    """Partition records into orbits under the cyclic group of ``generator``."""
    if not records:
        return []
    n = records[0].cone.n
    _check_perm(generator, n)
    elems = group_elements(generator)
    by_key = {}
    for r in records:
        by_key.setdefault(r.cone.canonical(), r)
    seen = set()
    orbits = []
    for r in records:
        k = r.cone.canonical()
        if k in seen:
            continue
        images = {r.cone.permuted(g).canonical() for g in elems}
        members = [by_key[x] for x in sorted(images, key=lambda t: (t[1], t[0])) if x in by_key]
        seen.update(images)
        rep = min(members, key=lambda m: (m.cone.canonical()[1], m.cone.canonical()[0]))
        orbits.append(Orbit(rep, tuple(members), len(images)))
    orbits.sort(key=lambda o: (o.representative.cone.canonical()[1], o.representative.cone.canonical()[0]))
    return orbits
