import xml.etree.ElementTree as ET

import numpy as np

from cyclic_concurrence.extremal import BoundaryCurve
from cyclic_concurrence.svg import plot_svg

NS = {"svg": "http://www.w3.org/2000/svg"}


def test_document_parses_with_points_and_curves():
    pts = np.random.default_rng(0).uniform(-1, 1, size=(500, 2))
    curve = BoundaryCurve("domain-edge", [[-0.5, 1.0], [0.0, 0.8], [0.5, 0.0]], "n4:demo")
    root = ET.fromstring(plot_svg(pts, [curve], title="demo <&>", metadata='{"seed": 1}'))
    assert root.find("svg:metadata", NS).text == '{"seed": 1}'
    lines = root.findall("svg:polyline", NS)
    assert len(lines) == 1
    assert lines[0].find("svg:title", NS).text == "n4:demo"
    assert any(t.text == "demo <&>" for t in root.iter("{http://www.w3.org/2000/svg}text"))


def test_duplicate_points_are_drawn_once():
    pts = np.zeros((1000, 2))
    root = ET.fromstring(plot_svg(pts))
    paths = [p for p in root.findall("svg:path", NS) if "h1v1" in p.get("d", "")]
    assert len(paths) == 1
    assert paths[0].get("d").count("M") == 1


def test_empty_plot_is_valid():
    root = ET.fromstring(plot_svg())
    assert root.get("width") == "480"
