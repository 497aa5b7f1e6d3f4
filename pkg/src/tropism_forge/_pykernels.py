"""Pure-Python hot kernels.

These are the reference implementations; ``_ckernels`` (Cython) provides the
same functions and is preferred when it imports.

Cone state used by the double-description kernel:

* ``lin``   - basis of the lineality space (integer tuples)
* ``rays``  - extreme rays modulo the lineality space (primitive integer tuples)
* ``zs``    - per ray, bitmask of the constraint indices tight at that ray
* ``ncons`` - number of constraints processed so far
"""
from __future__ import annotations

from functools import reduce
from itertools import product
from math import gcd
from operator import mul

NAME = "python"


def _prim(v):
    g = reduce(gcd, v, 0)
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _dot(a, b):
    return sum(map(mul, a, b))


def dd_intersect(lin, rays, zs, ncons, constraints):
    """Intersect a cone with constraints ``(h, is_equality)`` meaning h·x >= 0 or h·x == 0.

    Returns the new ``(lin, rays, zs, ncons)``.
    """
    lin = list(lin)
    rays = list(rays)
    zs = list(zs)
    for h, eq in constraints:
        bit = 1 << ncons
        pivot = None
        for idx, l in enumerate(lin):
            hl = _dot(h, l)
            if hl:
                pivot = idx
                break
        if pivot is not None:
            l = lin.pop(pivot)
            if hl < 0:
                l = tuple(-x for x in l)
                hl = -hl
            lin = [_prim(tuple(hl * a - _dot(h, lp) * b for a, b in zip(lp, l))) for lp in lin]
            rays = [_prim(tuple(hl * a - _dot(h, r) * b for a, b in zip(r, l))) for r in rays]
            zs = [z | bit for z in zs]
            if not eq:
                rays.append(l)
                zs.append(bit - 1)
            ncons += 1
            continue
        pos, neg, zero = [], [], []
        for r, z in zip(rays, zs):
            v = _dot(h, r)
            if v > 0:
                pos.append((r, z, v))
            elif v < 0:
                neg.append((r, z, v))
            else:
                zero.append((r, z | bit))
        new = zero if eq else zero + [(r, z) for r, z, _ in pos]
        if pos and neg:
            allz = zs
            for p, zp, vp in pos:
                for q, zq, vq in neg:
                    c = zp & zq
                    adjacent = True
                    for z in allz:
                        if z & c == c and z is not zp and z is not zq:
                            adjacent = False
                            break
                    if adjacent:
                        new.append((_prim(tuple(vp * b - vq * a for a, b in zip(p, q))), c | bit))
        rays = [r for r, _ in new]
        zs = [z for _, z in new]
        ncons += 1
    return lin, rays, zs, ncons


def _reduce_mod_cyclotomic(vec, phi):
    deg = len(phi) - 1
    c = list(vec)
    for k in range(len(c) - 1, deg - 1, -1):
        a = c[k]
        if a:
            for i in range(deg):
                c[k - deg + i] -= a * phi[i]
            c[k] = 0
    return c


def grid_search(m, nunknowns, equations, phi, limit=0, grid=0):
    """Assignments of powers of u (u a primitive m-th root of unity) vanishing on every equation.

    ``equations`` is a list of equations, each a list of ``(exps, coef)`` with
    ``exps`` an integer tuple of length ``nunknowns`` and ``coef`` an integer
    vector on the powers of u.  ``phi`` holds the m-th cyclotomic polynomial.
    Each unknown ranges over ``u^(e)`` for e in ``range(grid)`` (default m);
    callers wanting a coarser grid scale the exponents beforehand.  Returns
    the list of tuples e in lexicographic order; ``limit`` caps the number of
    solutions (0 = unlimited).
    """
    grid = grid or m
    eqs = [[(tuple(e), [(j, c) for j, c in enumerate(coef) if c]) for e, coef in eq] for eq in equations]
    # cheapest equations first
    eqs.sort(key=len)
    out = []
    for cand in product(range(grid), repeat=nunknowns):
        ok = True
        for eq in eqs:
            bucket = [0] * m
            for e, coef in eq:
                s = _dot(e, cand)
                for j, c in coef:
                    bucket[(s + j) % m] += c
            if any(_reduce_mod_cyclotomic(bucket, phi)):
                ok = False
                break
        if ok:
            out.append(cand)
            if limit and len(out) >= limit:
                break
    return out
