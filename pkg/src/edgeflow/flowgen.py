"""Synthetic edge flows: harmonic, gradient, line-graph-smooth, mixtures, noise.

Randomness comes from numpy's ``PCG64`` bit generator seeded directly with
the user seed (normal variates via numpy's ziggurat ``standard_normal``), so
every generator is a pure function of ``(graph, seed, parameters)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph, incidence_matrix, line_graph_laplacian
from .hodge import cycle_space_dimension, project_cyclic
from .spectral import eig_sym

__all__ = [
    "FlowRecipe",
    "TrivialCycleSpaceError",
    "rng",
    "random_harmonic_flow",
    "random_gradient_flow",
    "random_linegraph_smooth_flow",
    "add_gaussian_noise",
    "synthesize",
]


class TrivialCycleSpaceError(ValueError):
    """The graph has no cycles, so there is no non-zero harmonic flow."""


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def _subseeds(seed: int, n: int) -> list[int]:
    ss = np.random.SeedSequence(int(seed))
    return [int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(n)]


def _unit(x: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(x)
    return x / n if n > 0 else x


@dataclass(frozen=True)
class FlowRecipe:
    """Mixture weights and noise level for :func:`synthesize`.

    ``amplitude`` scales the unit-norm clean flow; ``cutoff`` is the number of
    line-graph eigenvectors used for the smooth component (``ceil(E/10)`` if
    unset).
    """

    harmonic_weight: float = 1.0
    gradient_weight: float = 0.0
    linegraph_smooth_weight: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0
    amplitude: float = 1.0
    cutoff: int | None = None

    def validate(self) -> None:
        weights = (self.harmonic_weight, self.gradient_weight, self.linegraph_smooth_weight)
        if any(w < 0 for w in weights):
            raise ValueError(f"mixture weights must be >= 0, got {weights}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.amplitude > 0 and not any(w > 0 for w in weights):
            raise ValueError("at least one mixture weight must be positive")

    def with_seed(self, seed: int) -> "FlowRecipe":
        return FlowRecipe(**{**asdict(self), "seed": int(seed)})

    def to_record(self) -> str:
        from .io import format_record

        return format_record({k: v for k, v in asdict(self).items() if v is not None})

    @classmethod
    def from_record(cls, text: str) -> "FlowRecipe":
        from .io import parse_record

        rec = parse_record(text)
        unknown = set(rec) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown recipe keys: {', '.join(sorted(unknown))}")
        kw: dict = {}
        for key, val in rec.items():
            kw[key] = int(val) if key in ("seed", "cutoff") else float(val)
        return cls(**kw)


def random_harmonic_flow(g: Graph, seed: int) -> np.ndarray:
    """Unit-norm random cyclic flow (``B f = 0``)."""
    if cycle_space_dimension(g) < 1:
        raise TrivialCycleSpaceError("graph is a forest: its cycle space is trivial")
    z = rng(seed).standard_normal(g.num_edges)
    return _unit(project_cyclic(g, z))


def random_gradient_flow(g: Graph, seed: int) -> np.ndarray:
    """Unit-norm ``B.T phi`` for a standard-normal node potential ``phi``."""
    if g.num_edges < 1:
        raise ValueError("graph has no edges")
    phi = rng(seed).standard_normal(g.num_nodes)
    return _unit(incidence_matrix(g).T @ phi)


def random_linegraph_smooth_flow(g: Graph, seed: int, cutoff: int | None = None) -> np.ndarray:
    """Unit-norm random combination of the ``cutoff`` lowest line-graph Laplacian modes."""
    e = g.num_edges
    if cutoff is None:
        cutoff = max(1, math.ceil(e / 10))
    if not 1 <= cutoff <= e:
        raise ValueError(f"cutoff must lie in [1, {e}], got {cutoff}")
    vecs = g.cached("eig_LLG", lambda: eig_sym(line_graph_laplacian(g))).eigenvectors
    coef = rng(seed).standard_normal(cutoff)
    return _unit(vecs[:, :cutoff] @ coef)


def add_gaussian_noise(f, sigma: float, seed: int) -> np.ndarray:
    """``f + eps`` with ``eps`` i.i.d. ``N(0, sigma^2)`` per entry."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    f = np.asarray(f, dtype=np.float64)
    if sigma == 0:
        return f.copy()
    return f + sigma * rng(seed).standard_normal(f.shape)


def synthesize(g: Graph, r: FlowRecipe) -> tuple[np.ndarray, np.ndarray]:
    """Clean flow ``f0`` and its noisy observation ``f``.

    ``f0`` is the weighted sum of unit-norm harmonic, gradient and
    line-graph-smooth components, rescaled to norm ``r.amplitude``.
    """
    r.validate()
    s_harm, s_grad, s_lg, s_noise = _subseeds(r.seed, 4)
    f0 = np.zeros(g.num_edges)
    if r.harmonic_weight > 0:
        f0 += r.harmonic_weight * random_harmonic_flow(g, s_harm)
    if r.gradient_weight > 0:
        f0 += r.gradient_weight * random_gradient_flow(g, s_grad)
    if r.linegraph_smooth_weight > 0:
        f0 += r.linegraph_smooth_weight * random_linegraph_smooth_flow(g, s_lg, r.cutoff)
    f0 = r.amplitude * _unit(f0)
    return f0, add_gaussian_noise(f0, r.noise_sigma, s_noise)
