"""Pure-Python fallback for the compiled kernels.

Same rotation order and arithmetic as ``_ckernels.pyx``; the inner loops over
rows/columns are numpy slice operations instead of C loops.
"""

from __future__ import annotations

import math

import numpy as np


def _offdiag_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return math.sqrt(float(np.sum(off * off)))


def jacobi_eigh(matrix, tol: float = 1e-12, max_sweeps: int = 100):
    a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.float64)
    sweep = 0
    while sweep < max_sweeps:
        if _offdiag_norm(a) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                x = a[:, p].copy()
                y = a[:, q].copy()
                a[:, p] = c * x - s * y
                a[:, q] = s * x + c * y
                x = a[p, :].copy()
                y = a[q, :].copy()
                a[p, :] = c * x - s * y
                a[q, :] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                x = v[:, p].copy()
                y = v[:, q].copy()
                v[:, p] = c * x - s * y
                v[:, q] = s * x + c * y
        sweep += 1
    return np.diag(a).copy(), v, sweep


def squared_distances(points, origin) -> np.ndarray:
    diff = np.asarray(points, dtype=np.float64) - np.asarray(origin, dtype=np.float64)
    out = np.zeros(diff.shape[0], dtype=np.float64)
    # column-by-column accumulation keeps the summation order of the C loop
    for j in range(diff.shape[1]):
        out = out + diff[:, j] * diff[:, j]
    return out
