"""Signal processing for flows on the edges of a graph.

Edge-Laplacian filters, the cycle/gradient (Hodge) split of edge space,
line-graph filters for comparison, and a small experiment harness.
"""
from ._kernels import BACKEND
from .filters import (
    FilterSpec,
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
)
from .flowgen import FlowRecipe, synthesize
from .graph import (
    Graph,
    build_graph,
    edge_laplacian,
    flip_orientation,
    graph_laplacian,
    incidence_matrix,
    line_graph,
    line_graph_laplacian,
)
from .hodge import cycle_space_dimension, hodge_decompose, ideal_lowpass, project_cyclic, project_gradient

__version__ = "0.1.0"
