# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: symmetric eigenvalues and LU log-determinant.

The eigensolver reduces the matrix to tridiagonal form with Householder
reflections (lower triangle only, row-major sweeps) and applies the
implicit-shift QL iteration to the tridiagonal matrix.
"""

from libc.math cimport fabs, sqrt, log, hypot, INFINITY

import numpy as np

BACKEND = "compiled"

DEF EPS = 2.220446049250313e-16
DEF MAX_QL_SWEEPS = 64


cdef void _tridiagonalize(double[:, ::1] a, double[::1] d, double[::1] e) noexcept nogil:
    """Reduce symmetric a (lower triangle authoritative) to tridiagonal (d, e).

    e[i] is the subdiagonal coupling between rows i-1 and i; e[0] = 0.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double scale, h, f, g, hh, s
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        if l > 0:
            scale = 0.0
            for k in range(i):
                scale += fabs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                for k in range(i):
                    a[i, k] /= scale
                    h += a[i, k] * a[i, k]
                f = a[i, l]
                g = -sqrt(h) if f >= 0.0 else sqrt(h)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                # g_vec = A u over the leading i x i block, fused lower-triangle sweep
                for j in range(i):
                    e[j] = 0.0
                for j in range(i):
                    f = a[i, j]
                    s = 0.0
                    for k in range(j):
                        s += a[j, k] * a[i, k]
                        e[k] += a[j, k] * f
                    e[j] += s + a[j, j] * f
                f = 0.0
                for j in range(i):
                    e[j] /= h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(i):
                    e[j] -= hh * a[i, j]
                for j in range(i):
                    f = a[i, j]
                    g = e[j]
                    for k in range(j + 1):
                        a[j, k] -= f * e[k] + g * a[i, k]
        else:
            e[i] = a[i, l]
    e[0] = 0.0
    for i in range(n):
        d[i] = a[i, i]


cdef int _tridiag_eigenvalues(double[::1] d, double[::1] e) noexcept nogil:
    """Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues into d.

    Returns 0 on success, -1 if some eigenvalue failed to converge.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t l, m, i
    cdef int sweeps
    cdef double dd, g, r, s, c, p, f, b
    if n <= 1:
        return 0
    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > MAX_QL_SWEEPS:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0


def eigvalsh(a):
    """Ascending eigenvalues of a real symmetric matrix."""
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ValueError("expected a square matrix")
    cdef Py_ssize_t n = work.shape[0]
    d = np.empty(n, dtype=np.float64)
    e = np.empty(n, dtype=np.float64)
    if n == 0:
        return d
    cdef double[:, ::1] av = work
    cdef double[::1] dv = d
    cdef double[::1] ev = e
    cdef int status
    with nogil:
        _tridiagonalize(av, dv, ev)
        status = _tridiag_eigenvalues(dv, ev)
    if status != 0:
        raise RuntimeError("QL iteration failed to converge")
    d.sort()
    return d


def slogdet_minpivot(a):
    """(sign, log|det|, min |pivot|) via partial-pivot Gaussian elimination."""
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    if work.ndim != 2 or work.shape[0] != work.shape[1]:
        raise ValueError("expected a square matrix")
    cdef Py_ssize_t n = work.shape[0]
    if n == 0:
        return 1.0, 0.0, INFINITY
    cdef double[:, ::1] m = work
    cdef Py_ssize_t i, j, k, p
    cdef double sign = 1.0
    cdef double logabs = 0.0
    cdef double minpivot = INFINITY
    cdef double best, piv, f
    with nogil:
        for k in range(n):
            p = k
            best = fabs(m[k, k])
            for i in range(k + 1, n):
                if fabs(m[i, k]) > best:
                    best = fabs(m[i, k])
                    p = i
            if best == 0.0:
                sign = 0.0
                logabs = -INFINITY
                minpivot = 0.0
                break
            if p != k:
                sign = -sign
                for j in range(k, n):
                    f = m[k, j]
                    m[k, j] = m[p, j]
                    m[p, j] = f
            piv = m[k, k]
            if fabs(piv) < minpivot:
                minpivot = fabs(piv)
            logabs += log(fabs(piv))
            if piv < 0.0:
                sign = -sign
            for i in range(k + 1, n):
                f = m[i, k] / piv
                for j in range(k + 1, n):
                    m[i, j] -= f * m[k, j]
    return sign, logabs, minpivot
