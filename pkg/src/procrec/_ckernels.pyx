# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cyclic Jacobi eigensolver and squared-distance scan."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef double _offdiag_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return sqrt(acc)


def jacobi_eigh(cnp.ndarray matrix, double tol=1e-12, int max_sweeps=100):
    """Eigen-decompose a symmetric matrix with cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps)``; eigenvalues are the
    unsorted diagonal, eigenvectors are columns.
    """
    cdef cnp.ndarray[double, ndim=2, mode="c"] arr = np.array(matrix, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[double, ndim=2, mode="c"] vec = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = arr
    cdef double[:, ::1] v = vec
    cdef Py_ssize_t p, q, k
    cdef double apq, theta, t, c, s, x, y
    cdef int sweep = 0

    with nogil:
        while sweep < max_sweeps:
            if _offdiag_norm(a, n) < tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - s * y
                        a[k, q] = s * x + c * y
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * y
                        a[q, k] = s * x + c * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * y
                        v[k, q] = s * x + c * y
            sweep += 1

    return np.diag(arr).copy(), vec, sweep


def squared_distances(cnp.ndarray points, cnp.ndarray origin):
    """Squared Euclidean distance from ``origin`` to every row of ``points``."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    org = np.ascontiguousarray(origin, dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    cdef cnp.ndarray[double, ndim=1, mode="c"] out = np.empty(m, dtype=np.float64)
    cdef const double[:, ::1] pv = pts
    cdef const double[::1] ov = org
    cdef double[::1] res = out
    cdef Py_ssize_t i, j
    cdef double acc, diff
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(d):
                diff = pv[i, j] - ov[j]
                acc = acc + diff * diff
            res[i] = acc
    return out
