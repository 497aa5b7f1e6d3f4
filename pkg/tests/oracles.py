"""Independent brute-force oracles shared by the unit and acceptance tests.

Nothing here calls the library's polyhedral code: hulls come from
enumerating support triples, pretropisms from scanning a box of integer
vectors.
"""
from __future__ import annotations

import random
from functools import reduce
from itertools import combinations, product
from math import gcd


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _primitive(v):
    g = reduce(gcd, v, 0)
    return tuple(x // g for x in v) if g else tuple(v)


def hull3_facets(points):
    """Inner facet normals of a full-dimensional 3d point set, by triple enumeration."""
    pts = sorted(set(map(tuple, points)))
    normals = set()
    for p, q, r in combinations(pts, 3):
        nrm = _cross(tuple(b - a for a, b in zip(p, q)), tuple(b - a for a, b in zip(p, r)))
        if nrm == (0, 0, 0):
            continue
        nrm = _primitive(nrm)
        for s in (nrm, tuple(-x for x in nrm)):
            lo = _dot(s, p)
            if all(_dot(s, a) >= lo for a in pts):
                normals.add(s)
    return normals


def hull3_vertices_edges(points):
    """Vertices lie on three independent facets, edges on two."""
    pts = sorted(set(map(tuple, points)))
    facets = hull3_facets(pts)

    def on(p):
        return {f for f in facets if _dot(f, p) == min(_dot(f, a) for a in pts)}

    def rank(vs):
        vs = list(vs)
        if not vs:
            return 0
        if all(_cross(vs[0], w) == (0, 0, 0) for w in vs):
            return 1
        for a, b, c in combinations(vs, 3):
            if _dot(_cross(a, b), c):
                return 3
        return 2

    vertices = [p for p in pts if rank(on(p)) == 3]
    edges = set()
    for p, q in combinations(vertices, 2):
        common = on(p) & on(q)
        # the segment must not pass through another support point on a facet of rank 2
        if rank(common) == 2:
            edges.add(frozenset((p, q)))
    return vertices, edges


def initial_support(points, v):
    lo = min(_dot(a, v) for a in points)
    return frozenset(a for a in points if _dot(a, v) == lo)


def box_pretropisms(supports, bound=3):
    """Primitive nonzero integer vectors with |coords| <= bound whose initial supports all have >= 2 points."""
    n = len(next(iter(supports[0])))
    out = {}
    for v in product(range(-bound, bound + 1), repeat=n):
        if not any(v) or reduce(gcd, v, 0) != 1:
            continue
        sig = tuple(initial_support(s, v) for s in supports)
        if all(len(x) >= 2 for x in sig):
            out[v] = sig
    return out


def random_supports(rng: random.Random, n: int, npolys: int, box: int = 5):
    sups = []
    for _ in range(npolys):
        k = rng.randint(2, 4)
        pts = set()
        while len(pts) < k:
            pts.add(tuple(rng.randrange(box) for _ in range(n)))
        sups.append(sorted(pts))
    return sups


def random_small_systems(count: int, seed: int = 2024):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 4)
        out.append(random_supports(rng, n, rng.randint(1, n - 1 if n > 2 else 1)))
    return out


def compare_with_box_oracle(supports, records, bound=3):
    """Return a list of disagreements between pretropism cone records and the box scan.

    Agreement means: every box pretropism lies in some output cone, and in
    one whose certificate is contained in the box vector's initial supports;
    every output cone's generators and interior point are pretropisms; a box
    vector in the relative interior of an output cone has exactly that cone's
    certificate as its signature.
    """
    problems = []
    box = box_pretropisms(supports, bound)
    for v, sig in box.items():
        hosts = [r for r in records if r.cone.contains(v)]
        if not hosts:
            problems.append(f"pretropism {v} not covered")
        elif not any(all(c <= s for c, s in zip(r.certificates, sig)) for r in hosts):
            problems.append(f"pretropism {v} has no cone with a compatible certificate")
    for r in records:
        for g in list(r.cone.rays) + [r.cone.interior_point()]:
            if any(len(initial_support(s, g)) < 2 for s in supports):
                problems.append(f"cone vector {g} is not a pretropism")
        gens = r.cone.generators()
        live = [h for h in r.cone.inequalities if any(_dot(h, g) for g in gens)]
        for v, sig in box.items():
            if r.cone.contains(v) and all(_dot(h, v) > 0 for h in live) and sig != tuple(r.certificates):
                problems.append(f"pretropism {v} in the relative interior of {r.cone} has another signature")
    return problems
