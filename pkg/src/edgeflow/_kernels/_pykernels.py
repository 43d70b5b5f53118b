"""Pure-Python (numpy) versions of the compiled kernels, same signatures."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def _csr(indptr, indices, data):
    n = len(indptr) - 1
    return sp.csr_matrix((data, indices, indptr), shape=(n, n))


def csr_matvec(indptr, indices, data, x):
    n = len(indptr) - 1
    m = sp.csr_matrix((data, indices, indptr), shape=(n, len(x)))
    return np.asarray(m @ np.asarray(x, dtype=np.float64), dtype=np.float64)


def smooth(indptr, indices, data, x, mu, k):
    m = _csr(indptr, indices, data)
    cur = np.array(x, dtype=np.float64, copy=True)
    for _ in range(k):
        cur -= mu * (m @ cur)
    return cur


def pcg(indptr, indices, data, b, rtol, maxiter):
    m = _csr(indptr, indices, data)
    b = np.asarray(b, dtype=np.float64)
    x = np.zeros_like(b)
    r = b.copy()
    bnorm = np.sqrt(r @ r)
    if bnorm == 0.0:
        return x, 0, 0
    d = m.diagonal()
    dinv = np.where(d > 0, 1.0 / np.where(d > 0, d, 1.0), 1.0)
    z = dinv * r
    p = z.copy()
    rz = r @ z
    it = 0
    while it < maxiter:
        q = m @ p
        pap = p @ q
        if pap <= 0.0:
            return x, it, 2
        step = rz / pap
        x += step * p
        r -= step * q
        it += 1
        if np.sqrt(r @ r) <= rtol * bnorm:
            return x, it, 0
        z = dinv * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, it, 1


def power_iteration(indptr, indices, data, x0, tol, maxiter):
    m = _csr(indptr, indices, data)
    v = np.array(x0, dtype=np.float64, copy=True)
    nrm = np.sqrt(v @ v)
    if nrm == 0.0:
        return 0.0, 0, True
    v /= nrm
    lam = 0.0
    it = 0
    while it < maxiter:
        w = m @ v
        lam = float(v @ w)
        it += 1
        if np.linalg.norm(w - lam * v) <= tol * abs(lam):
            return lam, it, True
        nrm = np.sqrt(w @ w)
        if nrm == 0.0:
            return 0.0, it, True
        v = w / nrm
    return lam, it, False
