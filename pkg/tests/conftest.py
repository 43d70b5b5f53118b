import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from edgeflow import _kernels
from edgeflow.graph import build_graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    # default orientation: 0->1, 1->2, 0->2
    return build_graph([(0, 1), (1, 2), (0, 2)], 3)


@pytest.fixture
def cyclic_triangle():
    # oriented around the cycle, so (1, 1, 1) is a circulation
    return build_graph([(0, 1), (1, 2), (2, 0)], 3, oriented=True)


@pytest.fixture
def path2():
    return build_graph([(0, 1), (1, 2)], 3)


@pytest.fixture
def single_edge():
    return build_graph([(0, 1)], 2)


@pytest.fixture(params=["python", "cython"])
def kernels(request):
    if request.param == "cython":
        if _kernels.compiled is None:
            pytest.skip("compiled kernels not built")
        return _kernels.compiled
    return _kernels.python


def random_graph(rng: np.random.Generator, n_max: int = 12, p: float | None = None, oriented: bool = True):
    """Random simple graph with random reference orientations (may be disconnected)."""
    n = int(rng.integers(1, n_max + 1))
    p = rng.uniform(0.1, 0.8) if p is None else p
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    if oriented:
        pairs = [(j, i) if rng.random() < 0.5 else (i, j) for i, j in pairs]
    return build_graph(pairs, n, oriented=True)


@st.composite
def graphs(draw, max_nodes: int = 10, min_edges: int = 0):
    n = draw(st.integers(1, max_nodes))
    all_pairs = list(itertools.combinations(range(n), 2))
    if len(all_pairs) < min_edges:
        n = max_nodes
        all_pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(all_pairs), unique=True, min_size=min(min_edges, len(all_pairs)))) if all_pairs else []
    flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    edges = [(j, i) if fl else (i, j) for (i, j), fl in zip(chosen, flips)]
    return build_graph(edges, n, oriented=True)


def dense_incidence(g) -> np.ndarray:
    """Oracle: incidence matrix straight from the definition."""
    b = np.zeros((g.num_nodes, g.num_edges))
    for e, (t, h) in enumerate(g.edges):
        b[t, e] = -1
        b[h, e] = 1
    return b


def dense_adjacency(g) -> np.ndarray:
    a = np.zeros((g.num_nodes, g.num_nodes))
    for t, h in g.edges:
        a[t, h] = a[h, t] = 1
    return a


def components_bfs(g) -> int:
    """Oracle: count connected components by breadth-first search."""
    nbrs = {i: set() for i in range(g.num_nodes)}
    for t, h in g.edges:
        nbrs[t].add(h)
        nbrs[h].add(t)
    seen, count = set(), 0
    for s in range(g.num_nodes):
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for v in nbrs[u] - seen:
                seen.add(v)
                stack.append(v)
    return count


def kkt_projection(g, f) -> np.ndarray:
    """Oracle: argmin ||x - f||^2 s.t. B x = 0 via a dense KKT least-squares solve."""
    b = dense_incidence(g)
    n, e = b.shape
    kkt = np.block([[2 * np.eye(e), b.T], [b, np.zeros((n, n))]])
    rhs = np.concatenate([2 * np.asarray(f, float), np.zeros(n)])
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return sol[:e]
