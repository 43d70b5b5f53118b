import xml.etree.ElementTree as ET

import numpy as np
import pytest

from edgeflow.graph import build_graph
from edgeflow.svg import layout, render_flow_svg

NS = "{http://www.w3.org/2000/svg}"


def test_svg_structure_and_direction():
    g = build_graph([(0, 1), (1, 2)], 3, coords=np.array([[0, 0], [1, 0], [2, 0]]))
    doc = render_flow_svg(g, [1.0, -0.5], title="demo")
    root = ET.fromstring(doc)
    lines = root.findall(f"{NS}line")
    assert len(lines) == 2 and len(root.findall(f"{NS}circle")) == 3
    # positive flow drawn tail -> head (left to right), negative reversed
    assert float(lines[0].get("x1")) < float(lines[0].get("x2"))
    assert float(lines[1].get("x1")) > float(lines[1].get("x2"))
    assert lines[0].get("marker-end") == "url(#arrow-pos)"
    assert lines[1].get("marker-end") == "url(#arrow-neg)"
    assert float(lines[0].get("stroke-width")) > float(lines[1].get("stroke-width"))


def test_svg_deterministic_without_coords():
    g = build_graph([(0, 1), (1, 2), (2, 0), (2, 3)], 4)
    a = render_flow_svg(g, [1, 2, 3, 4])
    assert a == render_flow_svg(g, [1, 2, 3, 4])
    np.testing.assert_array_equal(layout(g), layout(g))


def test_svg_length_check():
    g = build_graph([(0, 1)], 2)
    with pytest.raises(ValueError):
        render_flow_svg(g, [1.0, 2.0])
