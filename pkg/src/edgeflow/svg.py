"""Static SVG flow maps: one arrow per edge, width by magnitude.

An arrow points along the reference orientation when the flow is positive
(drawn blue) and against it when negative (drawn red), so sign changes
between two maps of the same graph show up as reversed arrowheads.
"""
from __future__ import annotations

from html import escape

import numpy as np

from .graph import Graph

__all__ = ["layout", "render_flow_svg"]

_POS = "#1f5fa8"
_NEG = "#c8372d"


def layout(g: Graph, seed: int = 0) -> np.ndarray:
    """Node positions: the graph's stored coordinates, else a seeded spring layout."""
    if g.coords is not None:
        return np.asarray(g.coords, dtype=float)
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.num_nodes))
    nxg.add_edges_from(g.edges)
    pos = nx.spring_layout(nxg, seed=seed)
    return np.array([pos[i] for i in range(g.num_nodes)], dtype=float)


def render_flow_svg(
    g: Graph,
    f,
    *,
    title: str | None = None,
    size: int = 640,
    margin: int = 40,
    seed: int = 0,
    scale: float | None = None,
) -> str:
    """Return an SVG document drawing edge flow ``f`` on ``g``.

    ``scale`` is the magnitude drawn at full width; pass the same value to
    several maps to make them comparable (defaults to ``max|f|``).
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (g.num_edges,):
        raise ValueError(f"flow must have length {g.num_edges}, got shape {f.shape}")
    xy = layout(g, seed)
    if len(xy):
        lo, hi = xy.min(axis=0), xy.max(axis=0)
        span = float(max((hi - lo).max(), 1e-12))
        xy = margin + (xy - lo) / span * (size - 2 * margin)
        xy[:, 1] = size - xy[:, 1]  # y axis up
    top = scale if scale is not None else float(np.abs(f).max(initial=0.0))
    top = top if top > 0 else 1.0
    node_r = 4.0

    head = size + (28 if title else 0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{head}" viewBox="0 {-28 if title else 0} {size} {head}">',
        "<defs>",
    ]
    for name, color in (("pos", _POS), ("neg", _NEG)):
        out.append(
            f'<marker id="arrow-{name}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="4" '
            f'markerHeight="4" orient="auto-start-reverse" markerUnits="strokeWidth">'
            f'<path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker>'
        )
    out.append("</defs>")
    out.append(f'<rect x="0" y="{-28 if title else 0}" width="{size}" height="{head}" fill="white"/>')
    if title:
        out.append(f'<text x="{size / 2:.1f}" y="-8" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>')
    for e, (t, h) in enumerate(g.edges):
        val = f[e]
        a, b = (xy[t], xy[h]) if val >= 0 else (xy[h], xy[t])
        d = b - a
        length = float(np.hypot(*d))
        if length > 2 * node_r:
            b = b - d / length * (node_r + 1.0)
        mag = min(abs(val) / top, 1.0)
        width = 0.75 + 5.25 * mag
        kind = "pos" if val >= 0 else "neg"
        color = _POS if val >= 0 else _NEG
        out.append(
            f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" stroke="{color}" '
            f'stroke-width="{width:.2f}" stroke-opacity="{0.35 + 0.65 * mag:.3f}" marker-end="url(#arrow-{kind})">'
            f"<title>edge {e} ({t}-&gt;{h}): {val:.6g}</title></line>"
        )
    for i, (x, y) in enumerate(xy):
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{node_r}" fill="#333"><title>node {i}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
