# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels (same contract as ``_pykernels``).

Vectors are held as int64 with overflow checks; any overflow raises
``OverflowError`` and the caller reruns the pure-Python kernel on
arbitrary-precision integers.  Zero-set bitmasks are arrays of 64-bit words.
"""
from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memset, memcpy
from libc.stdint cimport int64_t, uint64_t

NAME = "cython"

cdef extern from *:
    """
    static inline int tf_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int tf_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int tf_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int tf_mul(long long a, long long b, long long *r) nogil
    int tf_add(long long a, long long b, long long *r) nogil
    int tf_sub(long long a, long long b, long long *r) nogil


cdef int64_t _gcd(int64_t a, int64_t b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _dot(int64_t *a, int64_t *b, int n, int64_t *out) noexcept nogil:
    cdef long long s = 0, t
    cdef int i
    for i in range(n):
        if tf_mul(a[i], b[i], &t) or tf_add(s, t, &s):
            return 1
    out[0] = s
    return 0


cdef void _prim(int64_t *v, int n) noexcept nogil:
    cdef int64_t g = 0
    cdef int i
    for i in range(n):
        g = _gcd(g, v[i])
        if g == 1:
            return
    if g > 1:
        for i in range(n):
            v[i] //= g


cdef int _combine(int64_t *dst, int64_t ca, int64_t *a, int64_t cb, int64_t *b, int n) noexcept nogil:
    """dst = ca*a - cb*b, made primitive."""
    cdef long long x, y
    cdef int i
    for i in range(n):
        if tf_mul(ca, a[i], &x) or tf_mul(cb, b[i], &y) or tf_sub(x, y, &x):
            return 1
        dst[i] = x
    _prim(dst, n)
    return 0


cdef class _Store:
    """Growable array of (vector, zero-set) rows."""
    cdef int64_t *vec
    cdef uint64_t *zs
    cdef int n, nw, size, cap

    def __cinit__(self, int n, int nw, int cap):
        self.n = n
        self.nw = nw
        self.size = 0
        self.cap = cap if cap > 4 else 4
        self.vec = <int64_t *> malloc(self.cap * n * sizeof(int64_t) + 8)
        self.zs = <uint64_t *> malloc(self.cap * nw * sizeof(uint64_t) + 8)
        if self.vec == NULL or self.zs == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.vec)
        free(self.zs)

    cdef int grow(self) except -1:
        cdef int cap = self.cap * 2
        cdef int64_t *v = <int64_t *> realloc(self.vec, cap * self.n * sizeof(int64_t) + 8)
        if v == NULL:
            raise MemoryError()
        self.vec = v
        cdef uint64_t *z = <uint64_t *> realloc(self.zs, cap * self.nw * sizeof(uint64_t) + 8)
        if z == NULL:
            raise MemoryError()
        self.zs = z
        self.cap = cap
        return 0

    cdef int push(self) except -1:
        if self.size == self.cap:
            self.grow()
        memset(&self.zs[self.size * self.nw], 0, self.nw * sizeof(uint64_t))
        self.size += 1
        return self.size - 1


cdef int _load(_Store st, list rows, list masks) except -1:
    cdef int i, j, k, w
    cdef object z
    for row, z in zip(rows, masks):
        k = st.push()
        for j in range(st.n):
            st.vec[k * st.n + j] = row[j]
        for w in range(st.nw):
            st.zs[k * st.nw + w] = (z >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return 0


cdef object _mask(_Store st, int k):
    cdef object z = 0
    cdef int w
    for w in range(st.nw - 1, -1, -1):
        z = (z << 64) | st.zs[k * st.nw + w]
    return z


cdef tuple _row(int64_t *v, int n):
    return tuple([v[j] for j in range(n)])


def dd_intersect(lin, rays, zs, int ncons, constraints):
    """Intersect a cone with constraints ``(h, is_equality)``; see ``_pykernels``."""
    if not constraints:
        return list(lin), list(rays), list(zs), ncons
    cdef int n = len(constraints[0][0])
    cdef int total = ncons + len(constraints)
    cdef int nw = (total + 63) // 64
    if nw == 0:
        nw = 1
    cdef _Store L = _Store(n, 1, len(lin) + 1)
    cdef _Store R = _Store(n, nw, 2 * len(rays) + 8)
    cdef _Store R2
    cdef list hs = [c[0] for c in constraints]
    _load(L, list(lin), [0] * len(lin))
    _load(R, list(rays), list(zs))

    cdef int64_t *h = <int64_t *> malloc(n * sizeof(int64_t) + 8)
    cdef int64_t *vals = NULL
    cdef int64_t *tmp = <int64_t *> malloc(n * sizeof(int64_t) + 8)
    cdef uint64_t *common = <uint64_t *> malloc(nw * sizeof(uint64_t) + 8)
    cdef int ci, j, k, p, q, r, w, piv, eq, word, adjacent
    cdef int64_t hl, hv, vp, vq
    cdef uint64_t bitv
    cdef int64_t *lp
    try:
        for ci in range(len(constraints)):
            eq = 1 if constraints[ci][1] else 0
            hv_row = hs[ci]
            for j in range(n):
                h[j] = hv_row[j]
            word = ncons // 64
            bitv = (<uint64_t> 1) << (ncons % 64)

            piv = -1
            for k in range(L.size):
                if _dot(h, &L.vec[k * n], n, &hl):
                    raise OverflowError()
                if hl != 0:
                    piv = k
                    break
            if piv >= 0:
                lp = &L.vec[piv * n]
                if hl < 0:
                    for j in range(n):
                        lp[j] = -lp[j]
                    hl = -hl
                memcpy(tmp, lp, n * sizeof(int64_t))
                # drop the pivot row
                for k in range(piv, L.size - 1):
                    memcpy(&L.vec[k * n], &L.vec[(k + 1) * n], n * sizeof(int64_t))
                L.size -= 1
                for k in range(L.size):
                    if _dot(h, &L.vec[k * n], n, &hv):
                        raise OverflowError()
                    if _combine(&L.vec[k * n], hl, &L.vec[k * n], hv, tmp, n):
                        raise OverflowError()
                for k in range(R.size):
                    if _dot(h, &R.vec[k * n], n, &hv):
                        raise OverflowError()
                    if _combine(&R.vec[k * n], hl, &R.vec[k * n], hv, tmp, n):
                        raise OverflowError()
                    R.zs[k * nw + word] |= bitv
                if not eq:
                    k = R.push()
                    memcpy(&R.vec[k * n], tmp, n * sizeof(int64_t))
                    # tight at every earlier constraint
                    for w in range(nw):
                        if w < word:
                            R.zs[k * nw + w] = 0xFFFFFFFFFFFFFFFF
                        elif w == word:
                            R.zs[k * nw + w] = bitv - 1
                ncons += 1
                continue

            free(vals)
            vals = <int64_t *> malloc(R.size * sizeof(int64_t) + 8)
            for k in range(R.size):
                if _dot(h, &R.vec[k * n], n, &vals[k]):
                    raise OverflowError()
            R2 = _Store(n, nw, R.size + 8)
            for k in range(R.size):
                if vals[k] == 0 or (not eq and vals[k] > 0):
                    r = R2.push()
                    memcpy(&R2.vec[r * n], &R.vec[k * n], n * sizeof(int64_t))
                    memcpy(&R2.zs[r * nw], &R.zs[k * nw], nw * sizeof(uint64_t))
                    if vals[k] == 0:
                        R2.zs[r * nw + word] |= bitv
            for p in range(R.size):
                vp = vals[p]
                if vp <= 0:
                    continue
                for q in range(R.size):
                    vq = vals[q]
                    if vq >= 0:
                        continue
                    for w in range(nw):
                        common[w] = R.zs[p * nw + w] & R.zs[q * nw + w]
                    adjacent = 1
                    for k in range(R.size):
                        if k == p or k == q:
                            continue
                        for w in range(nw):
                            if (R.zs[k * nw + w] & common[w]) != common[w]:
                                break
                        else:
                            adjacent = 0
                            break
                    if adjacent:
                        r = R2.push()
                        if _combine(&R2.vec[r * n], vp, &R.vec[q * n], vq, &R.vec[p * n], n):
                            raise OverflowError()
                        memcpy(&R2.zs[r * nw], common, nw * sizeof(uint64_t))
                        R2.zs[r * nw + word] |= bitv
            R = R2
            ncons += 1

        out_lin = [_row(&L.vec[k * n], n) for k in range(L.size)]
        out_rays = [_row(&R.vec[k * n], n) for k in range(R.size)]
        out_zs = [_mask(R, k) for k in range(R.size)]
        return out_lin, out_rays, out_zs, ncons
    finally:
        free(h)
        free(tmp)
        free(common)
        free(vals)


def grid_search(int m, int nunknowns, equations, phi, limit=0, int grid=0):
    """Roots-of-unity grid enumeration; see ``_pykernels.grid_search``."""
    if grid <= 0:
        grid = m
    cdef int deg = len(phi) - 1
    cdef int neq = len(equations)
    cdef list eqs = sorted(
        [[(tuple(e), [(j, c) for j, c in enumerate(coef) if c]) for e, coef in eq] for eq in equations],
        key=len,
    )
    # flatten: per term the exponent row, then its (power, coef) pairs
    cdef int nterms = 0, npairs = 0
    for eq in eqs:
        nterms += len(eq)
        for _, cs in eq:
            npairs += len(cs)
    cdef int64_t *E = <int64_t *> malloc((nterms * nunknowns + 1) * sizeof(int64_t))
    cdef int *tstart = <int *> malloc((neq + 1) * sizeof(int))
    cdef int *pstart = <int *> malloc((nterms + 1) * sizeof(int))
    cdef int *ppow = <int *> malloc((npairs + 1) * sizeof(int))
    cdef int64_t *pcoef = <int64_t *> malloc((npairs + 1) * sizeof(int64_t))
    cdef int64_t *ph = <int64_t *> malloc((deg + 2) * sizeof(int64_t))
    cdef int64_t *bucket = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    cdef int *cand = <int *> malloc((nunknowns + 1) * sizeof(int))
    cdef int t = 0, pi = 0, qi, i, j, k, ok, s
    cdef long long a, x
    cdef long cap = limit
    cdef list out = []
    try:
        for i in range(deg + 1):
            ph[i] = phi[i]
        for qi in range(neq):
            tstart[qi] = t
            for e, cs in eqs[qi]:
                for j in range(nunknowns):
                    E[t * nunknowns + j] = e[j] % m
                pstart[t] = pi
                for pw, c in cs:
                    ppow[pi] = pw
                    pcoef[pi] = c
                    pi += 1
                t += 1
        tstart[neq] = t
        pstart[t] = pi
        for j in range(nunknowns):
            cand[j] = 0
        while True:
            ok = 1
            for qi in range(neq):
                for i in range(m):
                    bucket[i] = 0
                for t in range(tstart[qi], tstart[qi + 1]):
                    s = 0
                    for j in range(nunknowns):
                        s = (s + E[t * nunknowns + j] * cand[j]) % m
                    for pi in range(pstart[t], pstart[t + 1]):
                        k = (s + ppow[pi]) % m
                        if tf_add(bucket[k], pcoef[pi], &x):
                            raise OverflowError()
                        bucket[k] = x
                for k in range(m - 1, deg - 1, -1):
                    a = bucket[k]
                    if a:
                        for i in range(deg):
                            if tf_mul(a, ph[i], &x) or tf_sub(bucket[k - deg + i], x, &x):
                                raise OverflowError()
                            bucket[k - deg + i] = x
                        bucket[k] = 0
                for i in range(deg):
                    if bucket[i]:
                        ok = 0
                        break
                if not ok:
                    break
            if ok:
                out.append(tuple([cand[j] for j in range(nunknowns)]))
                if cap and len(out) >= cap:
                    break
            # odometer, last coordinate fastest (matches itertools.product)
            j = nunknowns - 1
            while j >= 0:
                cand[j] += 1
                if cand[j] < grid:
                    break
                cand[j] = 0
                j -= 1
            if j < 0:
                break
        return out
    finally:
        free(E)
        free(tstart)
        free(pstart)
        free(ppow)
        free(pcoef)
        free(ph)
        free(bucket)
        free(cand)
