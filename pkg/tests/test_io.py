import numpy as np
import pytest

from edgeflow.graph import build_graph, edge_laplacian, graph_laplacian
from edgeflow.io import (
    GraphMismatchError,
    ParseError,
    format_operator,
    graph_digest,
    parse_edge_list,
    parse_record,
    read_edge_list,
    read_signal,
    write_edge_list,
    write_signal,
)


def test_parse_edge_list():
    g = parse_edge_list("# a comment\n0\t1\n2\t1  # trailing\n\n")
    assert g.num_nodes == 3 and g.edges == ((0, 1), (2, 1))
    g = parse_edge_list("nodes 5\n0\t1\n")
    assert g.num_nodes == 5
    g = parse_edge_list("0 1\n1 2\ncoord 0 0 0\ncoord 1 1 0\ncoord 2 1 1\n")
    np.testing.assert_array_equal(g.coords, [[0, 0], [1, 0], [1, 1]])


@pytest.mark.parametrize(
    "text, line",
    [("0\t1\nx\t2\n", 2), ("0\t1\t2\n", 1), ("nodes\n", 1), ("coord 0 1\n", 1)],
)
def test_parse_edge_list_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(text, "g.tsv")
    assert info.value.line == line
    assert f"g.tsv:{line}:" in str(info.value)


def test_parse_edge_list_graph_errors():
    with pytest.raises(ParseError, match="self-loop"):
        parse_edge_list("1\t1\n")
    with pytest.raises(ParseError, match="duplicates"):
        parse_edge_list("0\t1\n1\t0\n")
    with pytest.raises(ParseError):
        parse_edge_list("nodes 2\n0\t3\n")


def test_edge_list_round_trip(tmp_path):
    g = build_graph([(3, 0), (0, 1), (2, 1)], 4, oriented=True, coords=np.array([[0.1, 0.2], [1, 2], [3, 4], [5, 6.5]]))
    write_edge_list(tmp_path / "g.tsv", g, "test graph")
    h = read_edge_list(tmp_path / "g.tsv")
    assert h == g
    np.testing.assert_array_equal(h.coords, g.coords)
    assert "3\t0" in (tmp_path / "g.tsv").read_text()


def test_signal_round_trip_is_bit_exact(tmp_path):
    g = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    f = np.array([1 / 3, -np.pi * 1e-17, 123456789.123456789])
    write_signal(tmp_path / "f.flow", f, graph=g, graph_name="g.tsv")
    back, header = read_signal(tmp_path / "f.flow", g)
    assert back.tobytes() == f.tobytes()
    assert header["domain"] == "edge" and header["edges_sha256"] == graph_digest(g)


def test_signal_mismatch(tmp_path):
    g = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    other = build_graph([(1, 0), (1, 2), (0, 2)], 3, oriented=True)
    write_signal(tmp_path / "f.flow", np.ones(3), graph=g)
    with pytest.raises(GraphMismatchError):
        read_signal(tmp_path / "f.flow", other)
    with pytest.raises(GraphMismatchError):
        read_signal(tmp_path / "f.flow", build_graph([(0, 1)], 2))
    with pytest.raises(GraphMismatchError):
        write_signal(tmp_path / "g.flow", np.ones(4), graph=g)


def test_signal_parse_errors(tmp_path):
    p = tmp_path / "bad.flow"
    p.write_text("0 1.0\n0 2.0\n")
    with pytest.raises(ParseError, match="twice"):
        read_signal(p)
    p.write_text("0 1.0\n2 2.0\n")
    with pytest.raises(ParseError):
        read_signal(p)
    p.write_text("0 abc\n")
    with pytest.raises(ParseError) as info:
        read_signal(p)
    assert info.value.line == 1


def test_format_operator_sorted_triplets():
    g = build_graph([(0, 1), (1, 2), (0, 2)], 3)
    text = format_operator(edge_laplacian(g))
    assert text.splitlines()[:4] == ["0 0 2", "0 1 -1", "0 2 1", "1 0 -1"]
    assert format_operator(graph_laplacian(build_graph([], 2))) == ""
    assert format_operator(np.array([[0.5, 0.0], [0.0, 0.0]])) == "0 0 0.5\n"


def test_parse_record():
    assert parse_record("a = 1\nb: x y\n# c = 2\n") == {"a": "1", "b": "x y"}
    with pytest.raises(ParseError):
        parse_record("just words\n")
