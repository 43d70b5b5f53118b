import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeflow.filters import (
    FilterSpec,
    FilterSpecError,
    MixedResponseError,
    StabilityWarning,
    apply_filter,
    flow_denoise,
    flow_denoise_sources,
    flow_smooth,
    frequency_response,
    is_lowpass,
    linegraph_denoise,
    linegraph_smooth,
    mixed_filter,
    node_denoise,
    node_smooth,
    operator_lambda_max,
)
from edgeflow.graph import build_graph, edge_laplacian, flip_orientation, line_graph_laplacian
from edgeflow.hodge import project_cyclic

from .conftest import dense_incidence, graphs, random_graph


def test_node_denoise_examples(single_edge, triangle):
    y = np.array([1.0, -2.0, 0.5])
    np.testing.assert_array_equal(node_denoise(triangle, y, 0.0), y)
    np.testing.assert_allclose(node_denoise(triangle, np.full(3, 4.2), 7.0), np.full(3, 4.2), rtol=1e-14)
    np.testing.assert_allclose(node_denoise(single_edge, [1.0, 0.0], 1.0), [2 / 3, 1 / 3], rtol=1e-14)


def test_node_smooth_examples(single_edge, triangle):
    y = np.array([1.0, -2.0, 0.5])
    np.testing.assert_array_equal(node_smooth(triangle, y, 0.2, 0), y)
    np.testing.assert_allclose(node_smooth(triangle, np.full(3, -1.5), 0.2, 10), np.full(3, -1.5), rtol=1e-14)
    np.testing.assert_allclose(node_smooth(single_edge, [1.0, 0.0], 0.2, 1), [0.8, 0.2], rtol=1e-14)


def test_flow_denoise_examples(cyclic_triangle, single_edge):
    f = np.ones(3)
    for alpha in (0.1, 1.0, 50.0):
        np.testing.assert_allclose(flow_denoise(cyclic_triangle, f, alpha), f, rtol=1e-12)
    g = np.array([0.3, -1.0, 2.0])
    np.testing.assert_array_equal(flow_denoise(cyclic_triangle, g, 0.0), g)
    np.testing.assert_allclose(flow_denoise(single_edge, [1.0], 1.0), [1 / 3], rtol=1e-14)


def test_flow_smooth_examples(cyclic_triangle, single_edge):
    np.testing.assert_allclose(flow_smooth(cyclic_triangle, np.ones(3), 0.2, 10), np.ones(3), rtol=1e-14)
    np.testing.assert_allclose(flow_smooth(single_edge, [1.0], 0.2, 1), [0.6], rtol=1e-14)


def test_flow_smooth_decays_gradient():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 10, p=0.5)
    b = dense_incidence(g)
    f = b.T @ rng.standard_normal(g.num_nodes)
    mu = 1.0 / operator_lambda_max(g, "L1")
    norms = [np.linalg.norm(flow_smooth(g, f, mu, k)) for k in range(0, 60, 3)]
    above_floor = [n for n in norms if n > 1e-12 * norms[0]]
    assert len(above_floor) > 3
    assert all(a > b for a, b in zip(above_floor, above_floor[1:]))
    assert norms[-1] < 1e-6 * norms[0]


def test_flow_denoise_sources_examples(single_edge, triangle):
    rng = np.random.default_rng(2)
    f = rng.standard_normal(3)
    np.testing.assert_allclose(flow_denoise_sources(triangle, f, 2.0, np.zeros(3)), flow_denoise(triangle, f, 2.0), atol=1e-14)
    np.testing.assert_allclose(flow_denoise_sources(single_edge, [0.0], 1.0, [-1.0, 1.0]), [2 / 3], rtol=1e-14)
    np.testing.assert_array_equal(flow_denoise_sources(triangle, f, 0.0, [1.0, 2.0, 3.0]), f)
    with pytest.raises(ValueError):
        flow_denoise_sources(triangle, f, 1.0, np.zeros(2))


def test_flow_denoise_sources_optimality():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 10, p=0.5)
    b = dense_incidence(g)
    f, phi, alpha = rng.standard_normal(g.num_edges), rng.standard_normal(g.num_nodes), 1.7
    x = flow_denoise_sources(g, f, alpha, phi)
    # gradient of ||x - f||^2 + alpha ||B x - phi||^2 vanishes
    grad = 2 * (x - f) + 2 * alpha * b.T @ (b @ x - phi)
    assert np.linalg.norm(grad) <= 1e-8 * max(1.0, np.linalg.norm(f))


def test_mixed_filter_examples(triangle, single_edge):
    f = np.array([1.0, -0.5, 2.0])
    np.testing.assert_array_equal(mixed_filter(triangle, f, 0.0, 0.0), f)
    np.testing.assert_allclose(mixed_filter(triangle, f, 3.0, 0.0), flow_denoise(triangle, f, 3.0), atol=1e-14)
    np.testing.assert_allclose(mixed_filter(single_edge, [1.0], 1.0, 7.0), [1 / 3], rtol=1e-14)
    np.testing.assert_allclose(mixed_filter(triangle, f, 0.0, 2.0), linegraph_denoise(triangle, f, 2.0), atol=1e-14)


def test_mixed_filter_optimality():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 10, p=0.5)
    l1, llg = edge_laplacian(g).toarray(), line_graph_laplacian(g).toarray()
    f = rng.standard_normal(g.num_edges)
    x = mixed_filter(g, f, 2.0, 0.3)
    grad = 2 * (x - f) + 2 * 2.0 * l1 @ x + 2 * 0.3 * llg @ x
    assert np.linalg.norm(grad) <= 1e-8 * np.linalg.norm(f)


def test_flow_denoise_gradient_condition():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 12, p=0.4)
    l1 = edge_laplacian(g).toarray()
    f = rng.standard_normal(g.num_edges)
    for alpha in (0.01, 1.0, 30.0):
        x = flow_denoise(g, f, alpha)
        assert np.linalg.norm(2 * (x - f) + 2 * alpha * l1 @ x) <= 1e-8 * np.linalg.norm(f)


def test_frequency_response_examples(triangle):
    r = frequency_response(triangle, FilterSpec("flow_denoise", alpha=1.0))
    np.testing.assert_allclose(r.eigenvalues, [0, 3, 3], atol=1e-12)
    np.testing.assert_allclose(r.values, [1, 0.25, 0.25], rtol=1e-12)
    r = frequency_response(triangle, FilterSpec("node_smooth", mu=0.2, k=10))
    assert r.values[0] == pytest.approx(1.0, abs=1e-12)
    r = frequency_response(triangle, FilterSpec("flow_smooth", mu=0.2, k=1))
    np.testing.assert_allclose(r.values[1:], [0.4, 0.4], rtol=1e-12)
    with pytest.raises(MixedResponseError):
        frequency_response(triangle, FilterSpec("mixed", alpha=1.0, beta=1.0))


def test_frequency_response_matches_diag_vthv():
    rng = np.random.default_rng(6)
    g = random_graph(rng, 9, p=0.6)
    l1 = edge_laplacian(g).toarray()
    w, v = np.linalg.eigh(l1)
    h = np.linalg.inv(np.eye(g.num_edges) + 0.7 * l1)
    r = frequency_response(g, FilterSpec("flow_denoise", alpha=0.7))
    np.testing.assert_allclose(r.values, np.diag(v.T @ h @ v), atol=1e-12)


def test_is_lowpass_examples():
    assert is_lowpass([1, 0.25, 0.25])
    assert is_lowpass([1, 0, 0])
    assert not is_lowpass([0, 1])
    assert is_lowpass([1.0, -0.2, 0.5], magnitude=True) is False
    assert is_lowpass([1.0, -0.5, 0.3, -0.1], magnitude=True)


def test_stability_warning(single_edge):
    with pytest.warns(StabilityWarning):
        flow_smooth(single_edge, [1.0], 1.0, 3)  # lambda_max = 2, mu >= 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        flow_smooth(single_edge, [1.0], 0.2, 3)


def test_filter_spec_validation():
    assert FilterSpec("flow_denoise", alpha=1.0).validate() == []
    notes = FilterSpec("flow_denoise", alpha=1.0, mu=0.3).validate()
    assert notes and "mu" in notes[0]
    for bad in (
        FilterSpec("nope"),
        FilterSpec("flow_denoise"),
        FilterSpec("flow_denoise", alpha=-1.0),
        FilterSpec("flow_smooth", mu=0.2, k=-1),
        FilterSpec("flow_smooth", mu=0.0, k=1),
        FilterSpec("flow_denoise_sources", alpha=1.0),
    ):
        with pytest.raises(FilterSpecError):
            bad.validate()


def test_filter_spec_record_round_trip():
    spec = FilterSpec("mixed", alpha=28.0, beta=0.06)
    assert FilterSpec.from_record(spec.to_record()) == spec
    spec = FilterSpec.from_record("# smoothing\nkind = flow_smooth\nmu = 0.2\nk = 10\n")
    assert spec == FilterSpec("flow_smooth", mu=0.2, k=10)
    with pytest.raises(FilterSpecError):
        FilterSpec.from_record("kind = flow_smooth\ngamma = 1\n")


def test_apply_filter_dispatch(triangle):
    f = np.array([1.0, 2.0, -1.0])
    cases = [
        (FilterSpec("flow_denoise", alpha=1.0), flow_denoise(triangle, f, 1.0)),
        (FilterSpec("flow_smooth", mu=0.2, k=3), flow_smooth(triangle, f, 0.2, 3)),
        (FilterSpec("mixed", alpha=1.0, beta=0.5), mixed_filter(triangle, f, 1.0, 0.5)),
        (FilterSpec("linegraph_denoise", alpha=1.0), linegraph_denoise(triangle, f, 1.0)),
        (FilterSpec("linegraph_smooth", mu=0.2, k=3), linegraph_smooth(triangle, f, 0.2, 3)),
        (FilterSpec("node_denoise", alpha=1.0), node_denoise(triangle, f, 1.0)),
        (FilterSpec("node_smooth", mu=0.2, k=3), node_smooth(triangle, f, 0.2, 3)),
        (FilterSpec("flow_denoise_sources", alpha=1.0, potential=np.ones(3)), flow_denoise_sources(triangle, f, 1.0, np.ones(3))),
    ]
    for spec, expected in cases:
        np.testing.assert_array_equal(apply_filter(triangle, f, spec), expected)


def _all_filters(g, alpha=0.8, beta=0.3, mu=0.1, k=5):
    return {
        "node_denoise": (lambda y: node_denoise(g, y, alpha), g.num_nodes),
        "node_smooth": (lambda y: node_smooth(g, y, mu, k), g.num_nodes),
        "flow_denoise": (lambda f: flow_denoise(g, f, alpha), g.num_edges),
        "flow_smooth": (lambda f: flow_smooth(g, f, mu, k), g.num_edges),
        "mixed": (lambda f: mixed_filter(g, f, alpha, beta), g.num_edges),
        "linegraph_smooth": (lambda f: linegraph_smooth(g, f, mu, k), g.num_edges),
    }


def test_linearity():
    rng = np.random.default_rng(8)
    for _ in range(10):
        g = random_graph(rng, 10, p=0.5)
        if g.num_edges == 0:
            continue
        for name, (fn, n) in _all_filters(g).items():
            x, y = rng.standard_normal(n), rng.standard_normal(n)
            a, b = rng.standard_normal(2)
            np.testing.assert_allclose(fn(a * x + b * y), a * fn(x) + b * fn(y), atol=1e-9, err_msg=name)
        # the source-aware filter is linear in (f, phi) jointly
        f1, f2 = rng.standard_normal((2, g.num_edges))
        p1, p2 = rng.standard_normal((2, g.num_nodes))
        a, b = rng.standard_normal(2)
        lhs = flow_denoise_sources(g, a * f1 + b * f2, 0.8, a * p1 + b * p2)
        rhs = a * flow_denoise_sources(g, f1, 0.8, p1) + b * flow_denoise_sources(g, f2, 0.8, p2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(graphs(max_nodes=10, min_edges=1), st.integers(0, 2**32 - 1))
def test_filters_commute_with_projection(g, seed):
    f = np.random.default_rng(seed).standard_normal(g.num_edges)
    mu = 0.9 / operator_lambda_max(g, "L1")
    for fn in (lambda x: flow_denoise(g, x, 1.3), lambda x: flow_smooth(g, x, mu, 4)):
        np.testing.assert_allclose(project_cyclic(g, fn(f)), fn(project_cyclic(g, f)), atol=1e-8)


def test_denoise_limit_is_projection():
    rng = np.random.default_rng(9)
    for _ in range(10):
        g = random_graph(rng, 10, p=0.5)
        if g.num_edges == 0:
            continue
        f = rng.standard_normal(g.num_edges)
        np.testing.assert_allclose(flow_denoise(g, f, 1e8), project_cyclic(g, f), atol=1e-5)


def test_line_graph_filters_are_not_orientation_equivariant(triangle):
    f = np.array([1.0, 2.0, -0.5])
    s = np.array([-1.0, 1.0, 1.0])
    flipped = flip_orientation(triangle, 0)
    a = flow_smooth(triangle, f, 0.2, 10)
    b = flow_smooth(flipped, s * f, 0.2, 10)
    np.testing.assert_allclose(b, s * a, atol=1e-12)
    a = linegraph_smooth(triangle, f, 0.2, 10)
    b = linegraph_smooth(flipped, s * f, 0.2, 10)
    assert np.max(np.abs(b - s * a)) > 1e-3


def test_empty_graph_filters():
    g = build_graph([], 3)
    y = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(node_denoise(g, y, 2.0), y)
    assert flow_denoise(g, np.zeros(0), 1.0).shape == (0,)
