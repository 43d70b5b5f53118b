"""Text formats: edge lists, signal files, operator triplets, key-value records.

Edge list::

    # comment
    nodes 4
    0<TAB>1
    1<TAB>2
    coord 0 0.0 1.5

Each edge line is ``tail head``; the order fixes the reference orientation.
``nodes`` is optional (default: max id + 1); ``coord`` lines are optional.

Signal file (edge flows or node signals)::

    # edgeflow signal
    # domain edge
    # graph city.tsv
    # edges_sha256 3f5a...
    # orientation tail->head as listed in the graph file
    0 0.25
    1 -1.5

Values are written with ``repr`` so that reading back is bit-exact.
"""
from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .graph import Graph, GraphError, build_graph

__all__ = [
    "ParseError",
    "GraphMismatchError",
    "graph_digest",
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
    "write_edge_list",
    "format_signal",
    "write_signal",
    "parse_signal",
    "read_signal",
    "format_operator",
    "write_operator",
    "parse_record",
    "format_record",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


class GraphMismatchError(ValueError):
    """A signal file does not belong to the given graph."""


def graph_digest(g: Graph) -> str:
    """SHA-256 of the node count and oriented edge list."""
    h = hashlib.sha256(f"nodes {g.num_nodes}\n".encode())
    for t, hd in g.edges:
        h.update(f"{t}\t{hd}\n".encode())
    return h.hexdigest()


def parse_edge_list(text: str, source: str | None = None) -> Graph:
    edges: list[tuple[int, int]] = []
    coords: dict[int, tuple[float, float]] = {}
    n_declared: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "nodes":
                if len(parts) != 2:
                    raise ValueError("expected 'nodes <N>'")
                n_declared = int(parts[1])
            elif parts[0] == "coord":
                if len(parts) != 4:
                    raise ValueError("expected 'coord <node> <x> <y>'")
                coords[int(parts[1])] = (float(parts[2]), float(parts[3]))
            else:
                if len(parts) != 2:
                    raise ValueError(f"expected 'tail<TAB>head', got {raw!r}")
                edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
    ids = [x for e in edges for x in e] + list(coords)
    n = n_declared if n_declared is not None else (max(ids) + 1 if ids else 0)
    xy = None
    if coords:
        if set(coords) != set(range(n)):
            raise ParseError(f"coord lines must cover all {n} nodes exactly", None, source)
        xy = np.array([coords[i] for i in range(n)], dtype=float)
    try:
        return build_graph(edges, n, oriented=True, coords=xy)
    except GraphError as exc:
        raise ParseError(str(exc), None, source) from exc


def read_edge_list(path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(encoding="utf-8"), str(path))


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"nodes {g.num_nodes}")
    out.extend(f"{t}\t{h}" for t, h in g.edges)
    if g.coords is not None:
        out.extend(f"coord {i} {x!r} {y!r}" for i, (x, y) in enumerate(g.coords.tolist()))
    return "\n".join(out) + "\n"


def write_edge_list(path, g: Graph, comment: str | None = None) -> None:
    Path(path).write_text(format_edge_list(g, comment), encoding="utf-8")


def format_signal(values, *, domain: str = "edge", graph: Graph | None = None, graph_name: str | None = None) -> str:
    values = np.asarray(values, dtype=np.float64)
    head = ["# edgeflow signal", f"# domain {domain}"]
    if graph_name:
        head.append(f"# graph {graph_name}")
    if graph is not None:
        expected = graph.num_edges if domain == "edge" else graph.num_nodes
        if values.shape != (expected,):
            raise GraphMismatchError(f"{domain} signal of length {values.size} for graph with {expected} {domain}s")
        head.append(f"# edges_sha256 {graph_digest(graph)}")
    if domain == "edge":
        head.append("# orientation tail->head as listed in the graph file")
    body = [f"{i} {float(v)!r}" for i, v in enumerate(values)]
    return "\n".join(head + body) + "\n"


def write_signal(path, values, **kw) -> None:
    Path(path).write_text(format_signal(values, **kw), encoding="utf-8")


def parse_signal(text: str, graph: Graph | None = None, source: str | None = None) -> tuple[np.ndarray, dict]:
    """Return ``(values, header)``.

    With ``graph`` given, the length and (when present) the edge-list digest
    are checked against it.
    """
    header: dict[str, str] = {}
    entries: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(None, 1)
            if len(parts) == 2:
                header.setdefault(parts[0], parts[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'index value', got {raw!r}", lineno, source)
        try:
            idx, val = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ParseError(str(exc), lineno, source) from None
        if idx in entries:
            raise ParseError(f"index {idx} given twice", lineno, source)
        entries[idx] = val
    n = len(entries)
    if set(entries) != set(range(n)):
        raise ParseError(f"indices must be exactly 0..{n - 1}", None, source)
    values = np.array([entries[i] for i in range(n)], dtype=np.float64)
    if graph is not None:
        domain = header.get("domain", "edge")
        expected = graph.num_edges if domain == "edge" else graph.num_nodes
        if n != expected:
            raise GraphMismatchError(f"{source or 'signal'}: {n} values but graph has {expected} {domain}s")
        digest = header.get("edges_sha256")
        if digest is not None and digest != graph_digest(graph):
            raise GraphMismatchError(f"{source or 'signal'}: written for a different edge list")
    return values, header


def read_signal(path, graph: Graph | None = None) -> tuple[np.ndarray, dict]:
    path = Path(path)
    return parse_signal(path.read_text(encoding="utf-8"), graph, str(path))


def format_operator(m) -> str:
    """``row col value`` triplets sorted by (row, col); zeros are skipped."""
    c = sp.coo_matrix(m)
    order = np.lexsort((c.col, c.row))
    lines = []
    for i in order:
        v = c.data[i]
        if v == 0:
            continue
        v = int(v) if float(v).is_integer() else float(v)
        lines.append(f"{c.row[i]} {c.col[i]} {v!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_operator(path, m) -> None:
    Path(path).write_text(format_operator(m), encoding="utf-8")


def parse_record(text: str) -> dict[str, str]:
    """Flat ``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    rec: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, val = line.split(sep, 1)
                break
        else:
            raise ParseError(f"expected 'key = value', got {raw!r}", lineno)
        rec[key.strip()] = val.strip()
    return rec


def format_record(items: dict) -> str:
    return "".join(f"{k} = {v!r}\n" if isinstance(v, float) else f"{k} = {v}\n" for k, v in items.items())
