"""Simple undirected graphs with a fixed reference orientation per edge.

All structural operators (incidence, Laplacians, line-graph) are built with
integer arithmetic and returned as read-only ``scipy.sparse.csr_matrix``
objects with sorted indices and no explicit zeros.  They are cached on the
graph, so repeated calls are cheap and return the same object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Graph",
    "GraphError",
    "SelfLoopError",
    "DuplicateEdgeError",
    "NodeIndexError",
    "EdgeIndexError",
    "build_graph",
    "incidence_matrix",
    "adjacency_matrix",
    "degree_matrix",
    "graph_laplacian",
    "edge_laplacian",
    "line_graph",
    "line_graph_adjacency",
    "line_graph_laplacian",
    "flip_orientation",
    "connected_components",
]


class GraphError(ValueError):
    """Base class for invalid graph input."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class NodeIndexError(GraphError):
    pass


class EdgeIndexError(GraphError, IndexError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph whose edges carry a reference orientation.

    Edge ``e`` is stored as ``(tail, head)`` and is oriented tail -> head.
    Edge indices are stable: every edge signal and every derived operator
    uses the order of :attr:`edges`.

    Use :func:`build_graph` rather than the constructor; it validates input.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None
    coords: np.ndarray | None = field(default=None, compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def tails(self) -> np.ndarray:
        return np.fromiter((t for t, _ in self.edges), dtype=np.int64, count=len(self.edges))

    @property
    def heads(self) -> np.ndarray:
        return np.fromiter((h for _, h in self.edges), dtype=np.int64, count=len(self.edges))

    def cached(self, key: str, build: Callable[[], object]):
        """Return ``build()`` memoised on this graph under ``key``.

        Graphs are immutable, so anything derived from them may be computed
        once.  Concurrent first calls may both build; ``setdefault`` keeps one.
        """
        try:
            return self._cache[key]
        except KeyError:
            return self._cache.setdefault(key, build())


def _freeze(m: sp.spmatrix) -> sp.csr_matrix:
    m = sp.csr_matrix(m)
    m.eliminate_zeros()
    m.sort_indices()
    for arr in (m.data, m.indices, m.indptr):
        arr.flags.writeable = False
    return m


def build_graph(
    edge_list: Iterable[Sequence[int]],
    node_count: int,
    *,
    oriented: bool = False,
    labels: Sequence[str] | None = None,
    coords: np.ndarray | None = None,
) -> Graph:
    """Validate an edge list and return a :class:`Graph`.

    Parameters
    ----------
    edge_list : iterable of pairs
        Node pairs with indices in ``[0, node_count)``.
    node_count : int
        Number of nodes ``N``; isolated nodes are allowed.
    oriented : bool, optional
        If true, each pair is taken as ``(tail, head)``.  Otherwise the
        reference orientation runs from the smaller to the larger index.
    labels : sequence of str, optional
        External node identifiers, one per node.
    coords : array of shape (N, 2), optional
        Node positions, used only for drawing.

    Raises
    ------
    SelfLoopError, DuplicateEdgeError, NodeIndexError
    """
    node_count = int(node_count)
    if node_count < 0:
        raise NodeIndexError(f"node count must be non-negative, got {node_count}")
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for i, pair in enumerate(edge_list):
        if len(pair) != 2:
            raise GraphError(f"edge {i}: expected a node pair, got {pair!r}")
        u, v = int(pair[0]), int(pair[1])
        for node in (u, v):
            if not 0 <= node < node_count:
                raise NodeIndexError(f"edge {i}: node {node} outside [0, {node_count})")
        if u == v:
            raise SelfLoopError(f"edge {i}: self-loop at node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"edge {i}: {key} duplicates edge {seen[key]}")
        seen[key] = i
        edges.append((u, v) if oriented else key)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != node_count:
            raise GraphError(f"got {len(labels)} labels for {node_count} nodes")
    if coords is not None:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (node_count, 2):
            raise GraphError(f"coords must have shape ({node_count}, 2), got {coords.shape}")
        coords.flags.writeable = False
    return Graph(node_count, tuple(edges), labels, coords)


def incidence_matrix(g: Graph) -> sp.csr_matrix:
    """Node-by-edge incidence matrix: -1 at the tail, +1 at the head."""

    def build():
        e = g.num_edges
        cols = np.repeat(np.arange(e, dtype=np.int64), 2)
        rows = np.empty(2 * e, dtype=np.int64)
        rows[0::2] = g.tails
        rows[1::2] = g.heads
        vals = np.tile(np.array([-1, 1], dtype=np.int64), e)
        return _freeze(sp.coo_matrix((vals, (rows, cols)), shape=(g.num_nodes, e)))

    return g.cached("B", build)


def adjacency_matrix(g: Graph) -> sp.csr_matrix:
    def build():
        t, h = g.tails, g.heads
        rows = np.concatenate([t, h])
        cols = np.concatenate([h, t])
        vals = np.ones(rows.size, dtype=np.int64)
        return _freeze(sp.coo_matrix((vals, (rows, cols)), shape=(g.num_nodes,) * 2))

    return g.cached("A", build)


def degree_matrix(g: Graph) -> sp.csr_matrix:
    def build():
        deg = np.asarray(adjacency_matrix(g).sum(axis=1)).ravel().astype(np.int64)
        return _freeze(sp.diags(deg, format="csr", dtype=np.int64))

    return g.cached("D", build)


def graph_laplacian(g: Graph) -> sp.csr_matrix:
    """``L = D - A`` (equal to ``B @ B.T``)."""
    return g.cached("L", lambda: _freeze(degree_matrix(g) - adjacency_matrix(g)))


def edge_laplacian(g: Graph) -> sp.csr_matrix:
    """Edge-Laplacian ``L1 = B.T @ B``; an operator on edge flows."""

    def build():
        b = incidence_matrix(g)
        return _freeze(b.T @ b)

    return g.cached("L1", build)


def line_graph_adjacency(g: Graph) -> sp.csr_matrix:
    """``|B.T @ B - 2 I|``: edges are adjacent when they share an endpoint."""

    def build():
        l1 = edge_laplacian(g)
        a = abs(l1 - 2 * sp.identity(g.num_edges, dtype=np.int64, format="csr"))
        return _freeze(a)

    return g.cached("A_LG", build)


def line_graph(g: Graph) -> Graph:
    """The line-graph of ``g``: one node per edge of ``g``."""

    def build():
        a = sp.triu(line_graph_adjacency(g), k=1).tocoo()
        pairs = sorted(zip(a.row.tolist(), a.col.tolist()))
        return build_graph(pairs, g.num_edges)

    return g.cached("LG", build)


def line_graph_laplacian(g: Graph) -> sp.csr_matrix:
    """``diag(A_LG 1) - A_LG``."""

    def build():
        a = line_graph_adjacency(g)
        deg = np.asarray(a.sum(axis=1)).ravel()
        return _freeze(sp.diags(deg, format="csr", dtype=np.int64) - a)

    return g.cached("L_LG", build)


def flip_orientation(g: Graph, e: int) -> Graph:
    """Return a copy of ``g`` with the reference orientation of edge ``e`` reversed."""
    if not 0 <= e < g.num_edges:
        raise EdgeIndexError(f"edge index {e} outside [0, {g.num_edges})")
    edges = list(g.edges)
    t, h = edges[e]
    edges[e] = (h, t)
    return Graph(g.num_nodes, tuple(edges), g.labels, g.coords)


def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    """Number of connected components and a component label per node."""
    from scipy.sparse.csgraph import connected_components as _cc

    return g.cached("components", lambda: _cc(adjacency_matrix(g), directed=False))
