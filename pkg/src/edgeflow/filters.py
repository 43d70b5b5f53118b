"""Node, line-graph and edge-space denoising/smoothing filters.

Rational filters ``(I + a M)^-1`` are evaluated by SPD solves, never by
forming an inverse.  Polynomial filters ``(I - mu M)^k`` are evaluated by
``k`` sparse mat-vecs in the kernel backend.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .graph import Graph, edge_laplacian, graph_laplacian, incidence_matrix, line_graph_laplacian
from .spectral import eig_sym, lambda_max, spd_solve

__all__ = [
    "KINDS",
    "FilterSpec",
    "FilterSpecError",
    "MixedResponseError",
    "StabilityWarning",
    "FrequencyResponse",
    "node_denoise",
    "node_smooth",
    "flow_denoise",
    "flow_smooth",
    "flow_denoise_sources",
    "mixed_filter",
    "linegraph_denoise",
    "linegraph_smooth",
    "apply_filter",
    "frequency_response",
    "is_lowpass",
    "operator_lambda_max",
]

KINDS = (
    "node_denoise",
    "node_smooth",
    "flow_denoise",
    "flow_smooth",
    "flow_denoise_sources",
    "mixed",
    "linegraph_denoise",
    "linegraph_smooth",
)
_DENOISERS = {"node_denoise", "flow_denoise", "flow_denoise_sources", "linegraph_denoise"}
_SMOOTHERS = {"node_smooth", "flow_smooth", "linegraph_smooth"}
_NODE_KINDS = {"node_denoise", "node_smooth"}
_DEFAULT_BASIS = {
    "node_denoise": "L",
    "node_smooth": "L",
    "flow_denoise": "L1",
    "flow_smooth": "L1",
    "flow_denoise_sources": "L1",
    "linegraph_denoise": "LLG",
    "linegraph_smooth": "LLG",
}
_REQUIRED = {
    "node_denoise": ("alpha",),
    "node_smooth": ("mu", "k"),
    "flow_denoise": ("alpha",),
    "flow_smooth": ("mu", "k"),
    "flow_denoise_sources": ("alpha", "potential"),
    "mixed": ("alpha", "beta"),
    "linegraph_denoise": ("alpha",),
    "linegraph_smooth": ("mu", "k"),
}


class FilterSpecError(ValueError):
    pass


class MixedResponseError(FilterSpecError):
    """The mixed filter has no frequency response over a single operator."""


class StabilityWarning(UserWarning):
    """Smoothing step ``mu`` is at or beyond ``2 / lambda_max``; iterates may grow."""


@dataclass(frozen=True)
class FilterSpec:
    kind: str
    alpha: float | None = None
    beta: float | None = None
    mu: float | None = None
    k: int | None = None
    potential: np.ndarray | None = None

    @property
    def domain(self) -> str:
        return "node" if self.kind in _NODE_KINDS else "edge"

    def validate(self) -> list[str]:
        """Raise on missing/invalid parameters; return notes about ignored ones."""
        if self.kind not in KINDS:
            raise FilterSpecError(f"unknown filter kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        required = _REQUIRED[self.kind]
        for name in required:
            if getattr(self, name) is None:
                raise FilterSpecError(f"{self.kind} needs parameter {name!r}")
        for name in ("alpha", "beta"):
            val = getattr(self, name)
            if name in required and not (val >= 0 and math.isfinite(val)):
                raise FilterSpecError(f"{name} must be a finite number >= 0, got {val}")
        if "mu" in required and not (self.mu > 0 and math.isfinite(self.mu)):
            raise FilterSpecError(f"mu must be a finite number > 0, got {self.mu}")
        if "k" in required and (int(self.k) != self.k or self.k < 0):
            raise FilterSpecError(f"k must be a non-negative integer, got {self.k}")
        return [
            f"parameter {f.name!r} is ignored by {self.kind}"
            for f in fields(self)
            if f.name != "kind" and f.name not in required and getattr(self, f.name) is not None
        ]

    def to_record(self) -> str:
        """Flat ``key = value`` text; the potential is not serialised."""
        lines = [f"kind = {self.kind}"]
        for name in ("alpha", "beta", "mu", "k"):
            val = getattr(self, name)
            if val is not None:
                lines.append(f"{name} = {val!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_record(cls, text: str) -> "FilterSpec":
        from .io import parse_record

        rec = parse_record(text)
        unknown = set(rec) - {"kind", "alpha", "beta", "mu", "k"}
        if unknown:
            raise FilterSpecError(f"unknown filter keys: {', '.join(sorted(unknown))}")
        if "kind" not in rec:
            raise FilterSpecError("filter record needs a 'kind' entry")
        kw = {n: float(rec[n]) for n in ("alpha", "beta", "mu") if n in rec}
        if "k" in rec:
            kw["k"] = int(rec["k"])
        return cls(rec["kind"], **kw)

    def with_(self, **changes) -> "FilterSpec":
        return replace(self, **changes)


@dataclass(frozen=True)
class FrequencyResponse:
    eigenvalues: np.ndarray
    values: np.ndarray


def _float_op(g: Graph, which: str) -> sp.csr_matrix:
    builders = {"L": graph_laplacian, "L1": edge_laplacian, "LLG": line_graph_laplacian}
    if which not in builders:
        raise FilterSpecError(f"unknown operator {which!r}; expected L, L1 or LLG")

    def build():
        m = sp.csr_matrix(builders[which](g), dtype=np.float64)
        m.sort_indices()
        return m

    return g.cached(f"{which}_f64", build)


def operator_lambda_max(g: Graph, which: str) -> float:
    """Largest eigenvalue of ``L``, ``L1`` or ``LLG`` (power iteration, cached)."""
    return g.cached(f"lmax_{which}", lambda: lambda_max(_float_op(g, which)))


def _signal(x, n: int, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n,):
        raise ValueError(f"{what} must have length {n}, got shape {x.shape}")
    return x


def _check_nonneg(**params) -> None:
    for name, val in params.items():
        if not val >= 0:
            raise FilterSpecError(f"{name} must be >= 0, got {val}")


def _rational(g: Graph, which: str, x: np.ndarray, alpha: float, rel_tol: float) -> np.ndarray:
    _check_nonneg(alpha=alpha)
    if alpha == 0:
        return x.copy()
    m = _float_op(g, which)
    system = sp.identity(m.shape[0], format="csr") + alpha * m
    return spd_solve(system, x, rel_tol)


def _polynomial(g: Graph, which: str, x: np.ndarray, mu: float, k: int) -> np.ndarray:
    if k < 0 or int(k) != k:
        raise FilterSpecError(f"k must be a non-negative integer, got {k}")
    if k == 0:
        return x.copy()
    m = _float_op(g, which)
    if m.shape[0] and mu >= 2.0 / max(operator_lambda_max(g, which), np.finfo(float).tiny):
        warnings.warn(
            f"mu={mu} >= 2/lambda_max({which})={2.0 / operator_lambda_max(g, which):.6g}; "
            "smoothing is not a contraction",
            StabilityWarning,
            stacklevel=3,
        )
    return _kernels.smooth(m.indptr, m.indices, m.data, x, float(mu), int(k))


def node_denoise(g: Graph, y, alpha: float, rel_tol: float = 1e-10) -> np.ndarray:
    """``(I + alpha L)^-1 y``: minimiser of ``||x - y||^2 + alpha x' L x``."""
    return _rational(g, "L", _signal(y, g.num_nodes, "node signal"), alpha, rel_tol)


def node_smooth(g: Graph, y, mu: float, k: int) -> np.ndarray:
    """``(I - mu L)^k y``."""
    return _polynomial(g, "L", _signal(y, g.num_nodes, "node signal"), mu, k)


def flow_denoise(g: Graph, f, alpha: float, rel_tol: float = 1e-10) -> np.ndarray:
    """``(I + alpha L1)^-1 f``.  Cyclic flows pass through unchanged."""
    return _rational(g, "L1", _signal(f, g.num_edges, "edge signal"), alpha, rel_tol)


def flow_smooth(g: Graph, f, mu: float, k: int) -> np.ndarray:
    """``(I - mu L1)^k f``."""
    return _polynomial(g, "L1", _signal(f, g.num_edges, "edge signal"), mu, k)


def flow_denoise_sources(g: Graph, f, alpha: float, phi, rel_tol: float = 1e-10) -> np.ndarray:
    """Denoise with known node divergence ``phi``.

    Returns ``(I + alpha L1)^-1 (f + alpha B.T phi)``, the minimiser of
    ``||x - f||^2 + alpha ||B x - phi||^2``.  With ``phi = 0`` this is
    :func:`flow_denoise`.
    """
    f = _signal(f, g.num_edges, "edge signal")
    phi = _signal(phi, g.num_nodes, "potential")
    _check_nonneg(alpha=alpha)
    if alpha == 0:
        return f.copy()
    return _rational(g, "L1", f + alpha * (incidence_matrix(g).T @ phi), alpha, rel_tol)


def mixed_filter(g: Graph, f, alpha: float, beta: float, rel_tol: float = 1e-10) -> np.ndarray:
    """``(I + alpha L1 + beta L_LG)^-1 f``."""
    f = _signal(f, g.num_edges, "edge signal")
    _check_nonneg(alpha=alpha, beta=beta)
    if beta == 0:
        return _rational(g, "L1", f, alpha, rel_tol)
    if alpha == 0:
        return _rational(g, "LLG", f, beta, rel_tol)
    system = sp.identity(g.num_edges, format="csr") + alpha * _float_op(g, "L1") + beta * _float_op(g, "LLG")
    return spd_solve(system, f, rel_tol)


def linegraph_denoise(g: Graph, f, alpha: float, rel_tol: float = 1e-10) -> np.ndarray:
    """Node denoising on the line-graph, treating flows as line-graph node data."""
    return _rational(g, "LLG", _signal(f, g.num_edges, "edge signal"), alpha, rel_tol)


def linegraph_smooth(g: Graph, f, mu: float, k: int) -> np.ndarray:
    """Node smoothing on the line-graph: ``(I - mu L_LG)^k f``."""
    return _polynomial(g, "LLG", _signal(f, g.num_edges, "edge signal"), mu, k)


def apply_filter(g: Graph, x, spec: FilterSpec, rel_tol: float = 1e-10) -> np.ndarray:
    """Dispatch on ``spec.kind``."""
    spec.validate()
    kind = spec.kind
    if kind == "node_denoise":
        return node_denoise(g, x, spec.alpha, rel_tol)
    if kind == "node_smooth":
        return node_smooth(g, x, spec.mu, spec.k)
    if kind == "flow_denoise":
        return flow_denoise(g, x, spec.alpha, rel_tol)
    if kind == "flow_smooth":
        return flow_smooth(g, x, spec.mu, spec.k)
    if kind == "flow_denoise_sources":
        return flow_denoise_sources(g, x, spec.alpha, spec.potential, rel_tol)
    if kind == "mixed":
        return mixed_filter(g, x, spec.alpha, spec.beta, rel_tol)
    if kind == "linegraph_denoise":
        return linegraph_denoise(g, x, spec.alpha, rel_tol)
    return linegraph_smooth(g, x, spec.mu, spec.k)


def frequency_response(g: Graph, spec: FilterSpec, basis: str | None = None) -> FrequencyResponse:
    """Response of ``spec`` over the ascending eigenvalues of ``basis`` (L, L1 or LLG).

    ``1 / (1 + alpha lam)`` for denoisers, ``(1 - mu lam)^k`` for smoothers.
    For ``flow_denoise_sources`` this is the response of its linear part.
    """
    if spec.kind == "mixed":
        raise MixedResponseError(
            "the mixed filter combines L1 and L_LG, which do not commute in general; "
            "it has no frequency response over a single eigenbasis"
        )
    if spec.kind not in _DEFAULT_BASIS:
        spec.validate()
    for name in _REQUIRED[spec.kind]:
        if name != "potential" and getattr(spec, name) is None:
            raise FilterSpecError(f"{spec.kind} needs parameter {name!r}")
    basis = basis or _DEFAULT_BASIS[spec.kind]
    lam = eig_sym(_float_op(g, basis)).eigenvalues
    if spec.kind in _DENOISERS:
        vals = 1.0 / (1.0 + spec.alpha * lam)
    else:
        vals = (1.0 - spec.mu * lam) ** int(spec.k)
    return FrequencyResponse(lam, vals)


def is_lowpass(h, *, magnitude: bool = False, tol: float = 1e-12) -> bool:
    """True if the response values are non-increasing (ties within ``tol``).

    With ``magnitude=True`` the check is applied to ``|h|``.
    """
    vals = np.asarray(getattr(h, "values", h), dtype=np.float64)
    if magnitude:
        vals = np.abs(vals)
    return bool(np.all(np.diff(vals) <= tol))
