# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the dual complex construction (pocsets with at most
64 hyperplanes, so that an orientation fits in one machine word)."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free, qsort

BACKEND = "cython"
MAX_HYPERPLANES = 64


cdef inline int _lowest_zero(uint64_t x):
    cdef int j = 0
    while x & 1:
        x >>= 1
        j += 1
    return j


cdef int _dfs(uint64_t decided, uint64_t value, uint64_t full,
              const uint64_t* fmask, const uint64_t* fbits,
              list out, Py_ssize_t cap) except -1:
    cdef int j, h
    while decided != full:
        j = _lowest_zero(decided)
        h = 2 * j
        if _dfs(decided | fmask[h], value | fbits[h], full, fmask, fbits, out, cap):
            return 1
        decided = decided | fmask[h + 1]
        value = value | fbits[h + 1]
    out.append(value)
    return 1 if len(out) > cap else 0


def enumerate_ultrafilters(int n, force_mask, force_bits, Py_ssize_t cap):
    if n > MAX_HYPERPLANES:
        raise ValueError("too many hyperplanes for the compiled kernel")
    cdef int size = 2 * n
    cdef uint64_t* fmask = <uint64_t*>malloc(max(size, 1) * sizeof(uint64_t))
    cdef uint64_t* fbits = <uint64_t*>malloc(max(size, 1) * sizeof(uint64_t))
    cdef uint64_t full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t>1 << n) - 1)
    cdef int i
    cdef list out = []
    try:
        for i in range(size):
            fmask[i] = force_mask[i]
            fbits[i] = force_bits[i]
        if _dfs(0, 0, full, fmask, fbits, out, cap):
            return None
        return out
    finally:
        free(fmask)
        free(fbits)


cdef struct Keyed:
    uint64_t key
    Py_ssize_t pos


cdef int _cmp_keyed(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<const Keyed*>a).key
    cdef uint64_t y = (<const Keyed*>b).key
    return (x > y) - (x < y)


cdef Py_ssize_t _find(const Keyed* arr, Py_ssize_t m, uint64_t key) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = m, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid].key < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < m and arr[lo].key == key:
        return arr[lo].pos
    return -1


cdef Keyed* _sorted_index(vertices, Py_ssize_t m) except NULL:
    cdef Keyed* arr = <Keyed*>malloc(max(m, 1) * sizeof(Keyed))
    cdef Py_ssize_t i
    for i in range(m):
        arr[i].key = vertices[i]
        arr[i].pos = i
    qsort(arr, m, sizeof(Keyed), _cmp_keyed)
    return arr


def build_edges(vertices, int n):
    cdef Py_ssize_t m = len(vertices)
    cdef Keyed* arr = _sorted_index(vertices, m)
    cdef uint64_t* vs = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    cdef uint64_t* flip = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    cdef Py_ssize_t i, k
    cdef int j
    cdef list edges = []
    try:
        for i in range(m):
            vs[i] = vertices[i]
            flip[i] = 0
        for i in range(m):
            for j in range(n):
                k = _find(arr, m, vs[i] ^ (<uint64_t>1 << j))
                if k >= 0:
                    flip[i] |= <uint64_t>1 << j
                    if i < k:
                        edges.append((i, k, j))
        edges.sort()
        return edges, [flip[i] for i in range(m)]
    finally:
        free(arr)
        free(vs)
        free(flip)


def median_failures(vertices, triples):
    cdef Py_ssize_t m = len(vertices)
    cdef Keyed* arr = _sorted_index(vertices, m)
    cdef uint64_t u, v, w
    cdef Py_ssize_t t
    cdef list bad = []
    try:
        for t, (a, b, c) in enumerate(triples):
            u = vertices[a]
            v = vertices[b]
            w = vertices[c]
            if _find(arr, m, (u & v) | (u & w) | (v & w)) < 0:
                bad.append(t)
        return bad
    finally:
        free(arr)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def distance_changes(source, target):
    cdef Py_ssize_t m = len(source)
    cdef uint64_t* a = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    cdef uint64_t* b = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    cdef Py_ssize_t i, j, up = 0, down = 0
    cdef int d0, d1
    try:
        for i in range(m):
            a[i] = source[i]
            b[i] = target[i]
        with nogil:
            for i in range(m):
                for j in range(i + 1, m):
                    d0 = __builtin_popcountll(a[i] ^ a[j])
                    d1 = __builtin_popcountll(b[i] ^ b[j])
                    if d1 > d0:
                        up += 1
                    elif d1 < d0:
                        down += 1
        return up, down
    finally:
        free(a)
        free(b)
