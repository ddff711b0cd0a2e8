# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field kernels; see ``_ffkernel_py`` for the reference semantics."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef int64_t _inv(int64_t a, int64_t p):
    cdef int64_t result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


cdef int _rank_buf(int64_t* m, int nrows, int ncols, int64_t p):
    cdef int r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = m[r * ncols + j]
                m[r * ncols + j] = m[piv * ncols + j]
                m[piv * ncols + j] = tmp
        inv = _inv(m[r * ncols + c], p)
        for j in range(c, ncols):
            m[r * ncols + j] = (m[r * ncols + j] * inv) % p
        for i in range(r + 1, nrows):
            f = m[i * ncols + c]
            if f != 0:
                for j in range(c, ncols):
                    m[i * ncols + j] = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                    if m[i * ncols + j] < 0:
                        m[i * ncols + j] += p
        r += 1
    return r


def rank_mod_p(rows, long p):
    cdef int nrows = len(rows)
    cdef int ncols = len(rows[0]) if nrows else 0
    if nrows == 0 or ncols == 0:
        return 0
    cdef int64_t* m = <int64_t*> malloc(nrows * ncols * sizeof(int64_t))
    cdef int i, j
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j] % p
        return _rank_buf(m, nrows, ncols, p)
    finally:
        free(m)


def first_candidate(D, int h, int m, long p, long start):
    cdef long total = 0
    cdef long pw = 1
    cdef int n = h * h * m
    cdef int64_t* Dm = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* mat = <int64_t*> malloc(m * h * sizeof(int64_t))
    cdef int64_t* u = <int64_t*> malloc(h * sizeof(int64_t))
    cdef int a, b, k, lead, pos, i
    cdef long idx, rem, block, found = -1
    cdef int64_t v
    for i in range(h):
        total += pw
        pw *= p
    try:
        for i in range(n):
            v = D[i] % p
            if v < 0:
                v += p
            Dm[i] = v
        for idx in range(start, total):
            # decode the projective point (same order as the reference kernel)
            rem = idx
            for lead in range(h - 1, -1, -1):
                block = 1
                for i in range(h - 1 - lead):
                    block *= p
                if rem < block:
                    break
                rem -= block
            for i in range(h):
                u[i] = 0
            u[lead] = 1
            for pos in range(h - 1, lead, -1):
                u[pos] = rem % p
                rem //= p
            for i in range(m * h):
                mat[i] = 0
            for a in range(h):
                if u[a] == 0:
                    continue
                for b in range(h):
                    for k in range(m):
                        v = Dm[(a * h + b) * m + k]
                        if v != 0:
                            mat[k * h + b] = (mat[k * h + b] + u[a] * v) % p
            if _rank_buf(mat, m, h, p) <= h - 2:
                found = idx
                break
        return found
    finally:
        free(Dm)
        free(mat)
        free(u)
