# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pure``; same signatures and results."""

from libc.stdlib cimport malloc, free as cfree, realloc
from libc.string cimport memcpy


cdef class UnionFind:
    cdef int *parent
    cdef int *rank
    cdef int n
    cdef int cap

    def __cinit__(self):
        self.cap = 64
        self.n = 0
        self.parent = <int *> malloc(self.cap * sizeof(int))
        self.rank = <int *> malloc(self.cap * sizeof(int))
        if self.parent == NULL or self.rank == NULL:
            raise MemoryError()

    def __dealloc__(self):
        cfree(self.parent)
        cfree(self.rank)

    def __len__(self):
        return self.n

    cpdef int add(self) except -1:
        cdef int *p
        cdef int *r
        if self.n == self.cap:
            self.cap *= 2
            p = <int *> realloc(self.parent, self.cap * sizeof(int))
            r = <int *> realloc(self.rank, self.cap * sizeof(int))
            if p == NULL or r == NULL:
                raise MemoryError()
            self.parent = p
            self.rank = r
        self.parent[self.n] = self.n
        self.rank[self.n] = 0
        self.n += 1
        return self.n - 1

    def copy(self):
        cdef UnionFind other = UnionFind.__new__(UnionFind)
        cdef int *p = <int *> realloc(other.parent, self.cap * sizeof(int))
        cdef int *r = <int *> realloc(other.rank, self.cap * sizeof(int))
        if p == NULL or r == NULL:
            raise MemoryError()
        other.parent = p
        other.rank = r
        other.cap = self.cap
        other.n = self.n
        memcpy(other.parent, self.parent, self.n * sizeof(int))
        memcpy(other.rank, self.rank, self.n * sizeof(int))
        return other

    cpdef int find(self, int i) except -1:
        if i < 0 or i >= self.n:
            raise IndexError(i)
        cdef int *parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    cpdef int union(self, int a, int b) except -2:
        cdef int ra = self.find(a)
        cdef int rb = self.find(b)
        cdef int t
        if ra == rb:
            return -1
        if self.rank[ra] < self.rank[rb]:
            t = ra
            ra = rb
            rb = t
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra


def search_box(int nvars, free, bounds, pivots, goal=None, long long goal_const=0, long long limit=0):
    cdef int nf = len(free)
    cdef int npiv = len(pivots)
    cdef int i, k, p
    cdef long long num, g
    cdef long long visited = 0
    cdef bint ok
    cdef long long *x = <long long *> malloc((nvars + 1) * sizeof(long long))
    cdef long long *vals = <long long *> malloc((nf + 1) * sizeof(long long))
    cdef long long *bnd = <long long *> malloc((nf + 1) * sizeof(long long))
    cdef int *fidx = <int *> malloc((nf + 1) * sizeof(int))
    cdef int *pidx = <int *> malloc((npiv + 1) * sizeof(int))
    cdef long long *pden = <long long *> malloc((npiv + 1) * sizeof(long long))
    cdef long long *pconst = <long long *> malloc((npiv + 1) * sizeof(long long))
    cdef long long *pcoef = <long long *> malloc((npiv * nf + 1) * sizeof(long long))
    cdef long long *gco = <long long *> malloc((nvars + 1) * sizeof(long long))
    cdef bint has_goal = goal is not None
    try:
        for i in range(nvars):
            x[i] = 0
            gco[i] = goal[i] if has_goal else 0
        for k in range(nf):
            vals[k] = 0
            bnd[k] = bounds[k]
            fidx[k] = free[k]
        for p in range(npiv):
            index, den, const, coeffs = pivots[p]
            pidx[p] = index
            pden[p] = den
            pconst[p] = const
            for k in range(nf):
                pcoef[p * nf + k] = coeffs[k]
        while True:
            if limit > 0 and visited >= limit:
                return None, visited
            visited += 1
            for k in range(nf):
                x[fidx[k]] = vals[k]
            ok = True
            for p in range(npiv):
                num = pconst[p]
                for k in range(nf):
                    num -= pcoef[p * nf + k] * vals[k]
                if num < 0 or num % pden[p] != 0:
                    ok = False
                    break
                x[pidx[p]] = num // pden[p]
            if ok:
                if not has_goal:
                    return [x[i] for i in range(nvars)], visited
                g = goal_const
                for i in range(nvars):
                    g += gco[i] * x[i]
                if g != 0:
                    return [x[i] for i in range(nvars)], visited
            k = 0
            while k < nf:
                if vals[k] < bnd[k]:
                    vals[k] += 1
                    break
                vals[k] = 0
                k += 1
            if k == nf:
                return None, visited
    finally:
        cfree(x)
        cfree(vals)
        cfree(bnd)
        cfree(fidx)
        cfree(pidx)
        cfree(pden)
        cfree(pconst)
        cfree(pcoef)
        cfree(gco)
