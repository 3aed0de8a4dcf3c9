"""
Symmetric tridiagonal eigensolver: QL iteration with implicit Wilkinson shifts.

Every block Hamiltonian in the canonical ordering is real symmetric
tridiagonal, so this is the only eigensolver the block path needs.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ContractError, NumericalError

MAX_SWEEPS = 60


def tridiagonal_eigh(diag, off, vectors=True, label=None):
    """Eigen-decompose the symmetric tridiagonal matrix ``(diag, off)``.

    Parameters
    ----------
    diag : array_like, shape (n,)
        Main diagonal.
    off : array_like, shape (n - 1,)
        Sub/super diagonal.
    vectors : bool
        Accumulate eigenvectors when true.
    label : str, optional
        Names the matrix in convergence errors.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n) or None
        Orthonormal eigenvectors as columns. Each column is sign-fixed so its
        last entry is positive (or, if that entry vanishes, its largest-magnitude
        entry).
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e_in = np.asarray(off, dtype=float)
    if e_in.size != max(n - 1, 0):
        raise ContractError(f"off-diagonal length {e_in.size} does not match n={n}")
    e = np.zeros(n)
    e[: n - 1] = e_in
    d = d.tolist()
    e = e.tolist()
    # rows of zt are the eigenvector columns
    zt = np.eye(n) if vectors else None
    buf = np.empty(n)
    tmp = np.empty(n)

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == MAX_SWEEPS:
                where = f" in {label}" if label else ""
                raise NumericalError(f"tridiagonal QL did not converge{where}")
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if vectors:
                    lo_row = zt[i]
                    hi_row = zt[i + 1]
                    np.copyto(buf, hi_row)
                    hi_row *= c
                    np.multiply(lo_row, s, out=tmp)
                    hi_row += tmp
                    lo_row *= c
                    np.multiply(buf, s, out=tmp)
                    lo_row -= tmp
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    w = np.array(d)
    order = np.argsort(w, kind="stable")
    w = w[order]
    if not vectors:
        return w, None
    v = zt[order].T.copy()
    for j in range(n):
        col = v[:, j]
        pivot = col[-1] if abs(col[-1]) > 1e-8 else col[np.argmax(np.abs(col))]
        if pivot < 0:
            v[:, j] = -col
    return w, v
