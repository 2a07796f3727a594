# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p dense matrix kernels (see _modp_py for the contract)."""

from libc.stdlib cimport free, malloc


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p
    cdef long long old_r = a % p, r = p
    cdef long long old_s = 1, s = 0
    cdef long long q, tmp
    while r != 0:
        q = old_r / r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    old_s %= p
    if old_s < 0:
        old_s += p
    return old_s


def mat_mul_mod(a, b, Py_ssize_t n, Py_ssize_t m, Py_ssize_t k, long long p):
    cdef long long *av = <long long *>malloc(n * m * sizeof(long long))
    cdef long long *bv = <long long *>malloc(m * k * sizeof(long long))
    cdef long long *ov = <long long *>malloc(n * k * sizeof(long long))
    cdef Py_ssize_t i, j, t
    cdef long long c, acc
    if av == NULL or bv == NULL or ov == NULL:
        free(av); free(bv); free(ov)
        raise MemoryError()
    try:
        for i in range(n * m):
            av[i] = a[i]
        for i in range(m * k):
            bv[i] = b[i]
        for i in range(n):
            for j in range(k):
                acc = 0
                for t in range(m):
                    c = av[i * m + t]
                    if c != 0:
                        acc = (acc + c * bv[t * k + j]) % p
                ov[i * k + j] = acc
        return [ov[i] for i in range(n * k)]
    finally:
        free(av); free(bv); free(ov)


def mat_rref_mod(a, Py_ssize_t nrows, Py_ssize_t ncols, long long p):
    cdef long long *m = <long long *>malloc(nrows * ncols * sizeof(long long))
    cdef Py_ssize_t i, j, c, r, pr
    cdef long long inv, f, tmp
    if m == NULL:
        raise MemoryError()
    pivots = []
    try:
        for i in range(nrows * ncols):
            m[i] = a[i] % p
        r = 0
        for c in range(ncols):
            pr = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != r:
                for j in range(ncols):
                    tmp = m[r * ncols + j]
                    m[r * ncols + j] = m[pr * ncols + j]
                    m[pr * ncols + j] = tmp
            inv = _inv_mod(m[r * ncols + c], p)
            for j in range(c, ncols):
                m[r * ncols + j] = (m[r * ncols + j] * inv) % p
            for i in range(nrows):
                if i == r:
                    continue
                f = m[i * ncols + c]
                if f == 0:
                    continue
                for j in range(c, ncols):
                    m[i * ncols + j] = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                    if m[i * ncols + j] < 0:
                        m[i * ncols + j] += p
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return [m[i] for i in range(nrows * ncols)], pivots
    finally:
        free(m)
