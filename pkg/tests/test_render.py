from __future__ import annotations

import math

import pytest

from topotext import render
from topotext.constants import BOTH
from topotext.diagramtools import landscape
from topotext.mapper import Edge, MapperGraph, MapperNode, PurityRow
from topotext.persistence import PersistenceDiagram


@pytest.fixture
def diagram() -> PersistenceDiagram:
    return PersistenceDiagram(((0, 0.0, math.inf), (0, 0.0, 1.0), (1, 1.0, math.sqrt(2))))


@pytest.fixture
def graph() -> MapperGraph:
    return MapperGraph(
        (
            MapperNode(0, 0, ("a", "b", "c"), {"Hafez": 3}),
            MapperNode(1, 1, ("c", "d"), {"Hafez": 1, "Saadi": 1}),
        ),
        (Edge(0, 1, 1),),
    )


class TestFigures:
    def test_barcode(self, diagram: PersistenceDiagram):
        svg = render.barcode_svg(diagram, math.sqrt(2))

        assert "<svg" in svg
        assert svg == render.barcode_svg(diagram, math.sqrt(2))

    def test_diagram(self, diagram: PersistenceDiagram):
        svg = render.diagram_svg(diagram, math.sqrt(2))

        assert "<svg" in svg
        assert "<dc:date>" not in svg

    def test_empty_diagram(self):
        assert "<svg" in render.barcode_svg(PersistenceDiagram(()), 0.0)
        assert "<svg" in render.diagram_svg(PersistenceDiagram(()), 0.0)

    def test_landscape(self, diagram: PersistenceDiagram):
        svg = render.landscape_svg(landscape(diagram, 1), "H1")

        assert "<svg" in svg

    def test_graph_is_deterministic(self, graph: MapperGraph):
        first = render.graph_svg(graph, seed=3)

        assert first == render.graph_svg(graph, seed=3)

    def test_empty_graph(self):
        assert "<svg" in render.graph_svg(MapperGraph((), ()))


class TestHtmlReport:
    def test_contents(self, graph: MapperGraph):
        html = render.html_report(
            graph,
            "<svg></svg>",
            partition={0: "Hafez", 1: BOTH},
            purity=[
                PurityRow("Hafez", "Hafez", 1, 3, 1.0),
                PurityRow(BOTH, "Saadi", 1, 2, None),
            ],
            terms={0: [("عشق", 1.5), ("می", 0.5)]},
            title="Divan",
        )

        assert "<title>Divan</title>" in html
        assert "2 nodes, 1 edges, cycle rank 0." in html
        assert "<svg></svg>" in html
        assert "1.0000" in html
        assert "عشق, می" in html
        assert "Hafez: 1, Saadi: 1" in html

    def test_title_is_escaped(self, graph: MapperGraph):
        html = render.html_report(graph, "", title="<b>x</b>")

        assert "&lt;b&gt;x&lt;/b&gt;" in html
        assert "<b>x</b>" not in html
