"""Symmetric eigendecomposition, SPD solves and pseudoinverse application."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from . import _kernels

__all__ = [
    "EigenDecomposition",
    "SpectralError",
    "NotSymmetricError",
    "ConvergenceError",
    "SolverError",
    "RANK_TOL",
    "DENSE_THRESHOLD",
    "eig_sym",
    "spd_solve",
    "pinv_apply",
    "pinv",
    "lambda_max",
    "kernel_dimension",
    "is_symmetric",
]

#: Relative threshold (w.r.t. the largest eigenvalue magnitude) below which an
#: eigenvalue counts as zero.  Shared by every kernel/rank decision.
RANK_TOL = 1e-8
#: Systems up to this size are solved by dense Cholesky, larger ones by PCG.
DENSE_THRESHOLD = 512


class SpectralError(ArithmeticError):
    pass


class NotSymmetricError(SpectralError, ValueError):
    pass


class ConvergenceError(SpectralError):
    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class SolverError(SpectralError):
    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order; column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _dense(m) -> np.ndarray:
    if sp.issparse(m):
        return m.toarray().astype(np.float64)
    return np.asarray(m, dtype=np.float64)


def is_symmetric(m, tol: float = 0.0) -> bool:
    """True if ``|m - m.T| <= tol * max|m|`` entrywise (exact when ``tol == 0``)."""
    if m.shape[0] != m.shape[1]:
        return False
    if sp.issparse(m):
        diff = abs(m - m.T)
        worst = diff.max() if diff.nnz else 0.0
        scale = abs(m).max() if m.nnz else 0.0
    else:
        m = np.asarray(m)
        worst = np.abs(m - m.T).max(initial=0.0)
        scale = np.abs(m).max(initial=0.0)
    return worst <= tol * scale


def eig_sym(m) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix (dense LAPACK ``syevd``).

    Raises
    ------
    NotSymmetricError
        If ``m`` is not symmetric to within ``1e-12`` relative.
    ConvergenceError
        If LAPACK fails to converge.
    """
    if m.shape[0] != m.shape[1] or not is_symmetric(m, 1e-12):
        raise NotSymmetricError(f"eig_sym needs a symmetric matrix, got shape {m.shape}")
    a = _dense(m)
    if a.size == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"symmetric eigensolver did not converge: {exc}") from exc
    return EigenDecomposition(w, v)


def _as_csr64(m) -> sp.csr_matrix:
    m = sp.csr_matrix(m, dtype=np.float64)
    m.sort_indices()
    return m


def spd_solve(
    m,
    rhs,
    rel_tol: float = 1e-10,
    *,
    max_iter: int | None = None,
    dense_threshold: int = DENSE_THRESHOLD,
) -> np.ndarray:
    """Solve ``m x = rhs`` for symmetric positive definite ``m``.

    Matrices of size ``<= dense_threshold`` are factorised with Cholesky.
    Larger (sparse) ones go through Jacobi-preconditioned conjugate gradients,
    stopped once ``||m x - rhs|| <= rel_tol * ||rhs||``.
    """
    b = np.asarray(rhs, dtype=np.float64)
    n = m.shape[0]
    if m.shape != (n, n) or b.shape != (n,):
        raise ValueError(f"shape mismatch: matrix {m.shape}, rhs {b.shape}")
    if n == 0:
        return np.zeros(0)
    if n <= dense_threshold:
        try:
            c = scipy.linalg.cho_factor(_dense(m), lower=True, check_finite=True)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverError(f"Cholesky factorisation failed: {exc}") from exc
        return scipy.linalg.cho_solve(c, b)
    a = _as_csr64(m)
    max_iter = 10 * n if max_iter is None else max_iter
    x, its, status = _kernels.pcg(a.indptr, a.indices, a.data, b, rel_tol, max_iter)
    if status == 2:
        raise SolverError("conjugate gradients broke down (matrix not positive definite?)", its)
    if status == 1:
        raise SolverError(f"conjugate gradients did not reach rel_tol={rel_tol} in {its} iterations", its)
    return x


def pinv_apply(m, v, rank_tol: float = RANK_TOL, eig: EigenDecomposition | None = None) -> np.ndarray:
    """Apply the Moore-Penrose pseudoinverse of symmetric ``m`` to ``v``.

    Eigenvalues with ``|lam| <= rank_tol * max|lam|`` are treated as zero.
    A precomputed decomposition may be passed as ``eig``.
    """
    w, vecs = eig if eig is not None else eig_sym(m)
    v = np.asarray(v, dtype=np.float64)
    inv = _pinv_diag(w, rank_tol)
    return vecs @ (inv * (vecs.T @ v))


def pinv(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Dense pseudoinverse of a symmetric matrix, same rank rule as :func:`pinv_apply`."""
    w, vecs = eig_sym(m)
    return (vecs * _pinv_diag(w, rank_tol)) @ vecs.T


def _pinv_diag(w: np.ndarray, rank_tol: float) -> np.ndarray:
    top = np.abs(w).max(initial=0.0)
    keep = np.abs(w) > rank_tol * top
    out = np.zeros_like(w)
    out[keep] = 1.0 / w[keep]
    return out


def kernel_dimension(m, rank_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues of symmetric ``m`` that count as zero."""
    w = eig_sym(m).eigenvalues
    top = np.abs(w).max(initial=0.0)
    return int(np.count_nonzero(np.abs(w) <= rank_tol * top))


def lambda_max(m, tol: float = 1e-6, max_iter: int = 100_000) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration."""
    a = _as_csr64(m)
    n = a.shape[0]
    if n == 0:
        return 0.0
    # deterministic start vector, not constant (constants lie in Laplacian kernels)
    x0 = 1.0 + np.sin(np.arange(1, n + 1, dtype=np.float64))
    lam, its, ok = _kernels.power_iteration(a.indptr, a.indices, a.data, x0, tol, max_iter)
    if not ok:
        raise ConvergenceError(f"power iteration did not converge in {its} iterations", its)
    return float(lam)
