"""Cycle/gradient split of edge flows.

Without filled triangles the edge space splits orthogonally into the cycle
space ``ker(B) = ker(L1)`` and the gradient space ``im(B.T) = im(L1)``.
Projections are computed as ``f - B.T L^+ B f`` using the node Laplacian,
which is ``N x N`` and normally smaller than ``L1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, connected_components, edge_laplacian, graph_laplacian, incidence_matrix
from .spectral import RANK_TOL, EigenDecomposition, eig_sym, pinv_apply

__all__ = [
    "HodgeDecomposition",
    "cycle_space_dimension",
    "cycle_space_dimension_spectral",
    "laplacian_eig",
    "edge_laplacian_eig",
    "node_potential",
    "project_cyclic",
    "project_gradient",
    "hodge_decompose",
    "ideal_lowpass",
    "ideal_lowpass_response",
    "cycle_basis",
]


@dataclass(frozen=True)
class HodgeDecomposition:
    cyclic: np.ndarray
    gradient: np.ndarray
    residual_norm: float

    @property
    def energies(self) -> tuple[float, float]:
        """Squared norms ``(||f_C||^2, ||f_G||^2)``."""
        return float(self.cyclic @ self.cyclic), float(self.gradient @ self.gradient)


def _frozen_eig(m) -> EigenDecomposition:
    dec = eig_sym(m)
    for arr in dec:
        arr.flags.writeable = False
    return dec


def laplacian_eig(g: Graph) -> EigenDecomposition:
    """Cached eigendecomposition of the node Laplacian ``L`` (read-only arrays)."""
    return g.cached("eig_L", lambda: _frozen_eig(graph_laplacian(g)))


def edge_laplacian_eig(g: Graph) -> EigenDecomposition:
    """Cached eigendecomposition of the Edge-Laplacian ``L1`` (read-only arrays)."""
    return g.cached("eig_L1", lambda: _frozen_eig(edge_laplacian(g)))


def _check_edge_signal(g: Graph, f) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (g.num_edges,):
        raise ValueError(f"edge signal must have length {g.num_edges}, got shape {f.shape}")
    return f


def cycle_space_dimension(g: Graph) -> int:
    """``E - N + C``: number of independent cycles."""
    c, _ = connected_components(g)
    return g.num_edges - g.num_nodes + int(c)


def cycle_space_dimension_spectral(g: Graph, rank_tol: float = RANK_TOL) -> int:
    """Dimension of ``ker(L1)`` counted from its spectrum."""
    w = edge_laplacian_eig(g).eigenvalues
    if w.size == 0:
        return 0
    return int(np.count_nonzero(np.abs(w) <= rank_tol * np.abs(w).max()))


def node_potential(g: Graph, f, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Minimum-norm potential ``phi = L^+ B f`` with ``B.T phi`` the gradient part of ``f``."""
    f = _check_edge_signal(g, f)
    return pinv_apply(graph_laplacian(g), incidence_matrix(g) @ f, rank_tol, eig=laplacian_eig(g))


def project_gradient(g: Graph, f, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthogonal projection of ``f`` onto the gradient space ``im(B.T)``."""
    phi = node_potential(g, f, rank_tol)
    return incidence_matrix(g).T @ phi


def project_cyclic(g: Graph, f, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthogonal projection of ``f`` onto the cycle space ``ker(B)``.

    This is the closest flow-conserving signal to ``f``.
    """
    f = _check_edge_signal(g, f)
    return f - project_gradient(g, f, rank_tol)


def hodge_decompose(g: Graph, f, rank_tol: float = RANK_TOL) -> HodgeDecomposition:
    f = _check_edge_signal(g, f)
    grad = project_gradient(g, f, rank_tol)
    cyc = f - grad
    return HodgeDecomposition(cyc, grad, float(np.linalg.norm(incidence_matrix(g) @ cyc)))


def ideal_lowpass_response(g: Graph, rank_tol: float = RANK_TOL) -> np.ndarray:
    """0/1 response over ascending ``L1`` eigenvalues: 1 exactly on the kernel."""
    w = edge_laplacian_eig(g).eigenvalues
    top = np.abs(w).max(initial=0.0)
    return (np.abs(w) <= rank_tol * top).astype(np.float64)


def ideal_lowpass(g: Graph, f, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Spectral ideal low-pass filter on ``L1``; agrees with :func:`project_cyclic`."""
    f = _check_edge_signal(g, f)
    v = edge_laplacian_eig(g).eigenvectors
    h = ideal_lowpass_response(g, rank_tol)
    return v @ (h * (v.T @ f))


def cycle_basis(g: Graph, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the cycle space as columns (diagnostic; not canonical)."""
    v = edge_laplacian_eig(g).eigenvectors
    return v[:, ideal_lowpass_response(g, rank_tol) == 1.0]
