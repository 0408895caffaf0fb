"""Dense symmetric eigensolver: Householder tridiagonalisation + implicit QL."""

from __future__ import annotations

import math

import numpy as np

from .config import ConvergenceError


def tridiagonalize(A: np.ndarray, want_q: bool = False):
    """Reduce symmetric ``A`` to tridiagonal form T = Q^T A Q.

    Returns (diag, offdiag, Q or None); offdiag[i] couples i and i+1.
    """
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    Q = np.eye(n) if want_q else None
    for k in range(n - 2):
        x = A[k + 1 :, k]
        sigma = float(np.dot(x[1:], x[1:]))
        if sigma == 0.0:
            continue
        norm = math.sqrt(x[0] * x[0] + sigma)
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        sub = A[k + 1 :, k + 1 :]
        p = sub @ v
        w = 2.0 * p - 2.0 * float(v @ p) * v
        sub -= np.outer(v, w) + np.outer(w, v)
        A[k + 1, k] = A[k, k + 1] = alpha
        A[k + 2 :, k] = 0.0
        A[k, k + 2 :] = 0.0
        if Q is not None:
            blk = Q[:, k + 1 :]
            blk -= 2.0 * np.outer(blk @ v, v)
    diag = np.diag(A).copy()
    off = np.diag(A, 1).copy() if n > 1 else np.zeros(0)
    return diag, off, Q


def tridiagonal_ql(diag, off, Z: np.ndarray | None = None, tol: float = 1e-12, budget: int | None = None):
    """Eigenvalues (and rotated Z) of a symmetric tridiagonal matrix by implicit-shift QL."""
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in off] + [0.0]
    if budget is None:
        budget = 64 * max(n, 1)
    anorm = max((abs(d[i]) + abs(e[i]) + (abs(e[i - 1]) if i else 0.0) for i in range(n)), default=0.0)
    floor = 1e-15 * anorm
    used = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            used += 1
            if used > budget:
                raise ConvergenceError(f"QL iteration budget {budget} exhausted")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            early = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Z is not None:
                    zi = Z[:, i].copy()
                    zj = Z[:, i + 1]
                    Z[:, i] = c * zi - s * zj
                    Z[:, i + 1] = s * zi + c * zj
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d), Z


def symmetric_eigen(A: np.ndarray, vectors: bool = False, tol: float = 1e-12):
    """Eigenvalues ascending (and eigenvector columns if asked)."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if vectors else None)
    # scale to unit max-norm so subnormal or huge entries do not stall deflation
    scale = float(np.abs(A).max())
    if scale == 0.0:
        return np.zeros(n), (np.eye(n) if vectors else None)
    diag, off, Q = tridiagonalize(A / scale, want_q=vectors)
    vals, Z = tridiagonal_ql(diag, off, Z=Q, tol=tol)
    vals = vals * scale
    idx = np.argsort(vals, kind="stable")
    vals = vals[idx]
    if vectors:
        return vals, Z[:, idx]
    return vals, None
