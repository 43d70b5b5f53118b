# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sparse kernels over CSR arrays (float64 values, int32/int64 indices)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

ctypedef fused index_t:
    cnp.int32_t
    cnp.int64_t


cdef inline void _matvec(const index_t[::1] indptr, const index_t[::1] indices,
                         const double[::1] data, const double[::1] x,
                         double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, n = out.shape[0]
    cdef double s
    for i in range(n):
        s = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            s += data[j] * x[indices[j]]
        out[i] = s


cdef inline double _dot(const double[::1] a, const double[::1] b) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(a.shape[0]):
        s += a[i] * b[i]
    return s


def csr_matvec(const index_t[::1] indptr, const index_t[::1] indices,
               const double[::1] data, const double[::1] x):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        _matvec(indptr, indices, data, x, o)
    return out


def smooth(const index_t[::1] indptr, const index_t[::1] indices,
           const double[::1] data, const double[::1] x, double mu, Py_ssize_t k):
    """Apply ``x <- x - mu * M x`` ``k`` times."""
    cdef Py_ssize_t n = x.shape[0], i, it
    cur = np.array(x, dtype=np.float64, copy=True)
    tmp = np.empty(n, dtype=np.float64)
    cdef double[::1] c = cur
    cdef double[::1] t = tmp
    with nogil:
        for it in range(k):
            _matvec(indptr, indices, data, c, t)
            for i in range(n):
                c[i] = c[i] - mu * t[i]
    return cur


def pcg(const index_t[::1] indptr, const index_t[::1] indices,
        const double[::1] data, const double[::1] b, double rtol, Py_ssize_t maxiter):
    """Jacobi-preconditioned conjugate gradients from a zero initial guess.

    Returns ``(x, iterations, status)`` with status 0 on convergence,
    1 when ``maxiter`` is exhausted and 2 on breakdown.
    """
    cdef Py_ssize_t n = b.shape[0], i, j, it = 0
    cdef int status = 1
    cdef double bnorm, rz, rz_new, pap, step, beta, rnorm, d

    x_arr = np.zeros(n, dtype=np.float64)
    r_arr = np.array(b, dtype=np.float64, copy=True)
    z_arr = np.empty(n, dtype=np.float64)
    p_arr = np.empty(n, dtype=np.float64)
    q_arr = np.empty(n, dtype=np.float64)
    dinv_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] x = x_arr, r = r_arr, z = z_arr, p = p_arr, q = q_arr, dinv = dinv_arr

    with nogil:
        for i in range(n):
            d = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                if indices[j] == i:
                    d = data[j]
            dinv[i] = 1.0 / d if d > 0.0 else 1.0
        bnorm = sqrt(_dot(r, r))
        if bnorm == 0.0:
            status = 0
        else:
            for i in range(n):
                z[i] = dinv[i] * r[i]
                p[i] = z[i]
            rz = _dot(r, z)
            while it < maxiter:
                _matvec(indptr, indices, data, p, q)
                pap = _dot(p, q)
                if pap <= 0.0:
                    status = 2
                    break
                step = rz / pap
                for i in range(n):
                    x[i] += step * p[i]
                    r[i] -= step * q[i]
                it += 1
                rnorm = sqrt(_dot(r, r))
                if rnorm <= rtol * bnorm:
                    status = 0
                    break
                for i in range(n):
                    z[i] = dinv[i] * r[i]
                rz_new = _dot(r, z)
                beta = rz_new / rz
                rz = rz_new
                for i in range(n):
                    p[i] = z[i] + beta * p[i]
    return x_arr, it, status


def power_iteration(const index_t[::1] indptr, const index_t[::1] indices,
                    const double[::1] data, const double[::1] x0,
                    double tol, Py_ssize_t maxiter):
    """Largest-magnitude eigenvalue of a symmetric matrix by power iteration.

    Returns ``(lam, iterations, converged)``; convergence means the residual
    ``||M v - lam v||`` dropped to ``tol * |lam|``, which bounds the distance
    from ``lam`` to the spectrum.
    """
    cdef Py_ssize_t n = x0.shape[0], i, it = 0
    cdef double nrm, res, lam = 0.0
    cdef bint converged = False
    v_arr = np.array(x0, dtype=np.float64, copy=True)
    w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] v = v_arr, w = w_arr
    with nogil:
        nrm = sqrt(_dot(v, v))
        if nrm == 0.0:
            converged = True
        else:
            for i in range(n):
                v[i] /= nrm
            while it < maxiter:
                _matvec(indptr, indices, data, v, w)
                lam = _dot(v, w)
                it += 1
                res = 0.0
                for i in range(n):
                    res += (w[i] - lam * v[i]) * (w[i] - lam * v[i])
                if sqrt(res) <= tol * fabs(lam):
                    converged = True
                    break
                nrm = sqrt(_dot(w, w))
                if nrm == 0.0:
                    lam = 0.0
                    converged = True
                    break
                for i in range(n):
                    v[i] = w[i] / nrm
    return lam, it, converged
