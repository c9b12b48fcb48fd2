from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from topotext import io as artifacts
from topotext.complex import build_rips
from topotext.diagramtools import eval_landscape, landscape
from topotext.errors import DimensionMismatchError, EmptyInputError, InputError
from topotext.mapper import Edge, MapperGraph, MapperNode, PurityRow
from topotext.metricspace import DistanceMatrix
from topotext.persistence import PersistenceDiagram
from topotext.synthetic import circle
from topotext.textpipeline import Corpus, Document, tfidf


@pytest.fixture
def diagram() -> PersistenceDiagram:
    return PersistenceDiagram(((0, 0.0, math.inf), (0, 0.0, 1.0), (1, 1.0, math.sqrt(2))))


class TestDiagramCsv:
    def test_layout(self, diagram: PersistenceDiagram):
        text = artifacts.diagram_to_csv(diagram)

        assert text.splitlines() == [
            "dim,birth,death",
            "0,0.0,1.0",
            "0,0.0,inf",
            "1,1.0,1.4142135623730951",
        ]

    def test_round_trip(self, diagram: PersistenceDiagram, tmp_path: Path):
        path = artifacts.write_diagram(diagram, tmp_path / "square.diagram.csv")

        assert artifacts.read_diagram(path) == diagram

    def test_wrong_header(self):
        with pytest.raises(InputError, match="header"):
            artifacts.diagram_from_csv("a,b,c\n0,0,1\n")

    def test_bad_row(self):
        with pytest.raises(InputError, match="line 2"):
            artifacts.diagram_from_csv("dim,birth,death\n0,zero,1\n")


def test_landscape_round_trip(tmp_path: Path):
    d = PersistenceDiagram(((1, 0.0, 2.0), (1, 1.0, 3.0)))
    l = landscape(d, 1, k_max=4)

    loaded = artifacts.read_landscape(artifacts.write_landscape(l, tmp_path / "l.csv"), 4)

    assert loaded.k_max == 4
    assert loaded.domain == (0.0, 3.0)
    for k in range(1, 5):
        assert np.array_equal(loaded.critical_points(k), l.critical_points(k))
    assert eval_landscape(loaded, 2, 1.5) == 0.5


class TestPointCloud:
    def test_header_and_ids(self, tmp_path: Path):
        path = tmp_path / "cloud.csv"
        path.write_text("id,x,y\na,0,0\nb,3,4\n", encoding="utf-8")

        cloud = artifacts.read_point_cloud(path)

        assert cloud.ids == ("a", "b")
        assert cloud.points.tolist() == [[0, 0], [3, 4]]

    def test_numeric_ids_need_the_flag(self, tmp_path: Path):
        path = tmp_path / "cloud.csv"
        path.write_text("101,0,0\n102,3,4\n", encoding="utf-8")

        with_ids = artifacts.read_point_cloud(path, id_column=True)
        without = artifacts.read_point_cloud(path)

        assert with_ids.ids == ("101", "102")
        assert with_ids.points.tolist() == [[0, 0], [3, 4]]
        assert without.ids == ("0", "1")
        assert without.dim == 3

    def test_id_column_with_unnamed_header(self, tmp_path: Path):
        path = tmp_path / "cloud.csv"
        path.write_text("name,x,y\na,0,0\nb,3,4\n", encoding="utf-8")

        cloud = artifacts.read_point_cloud(path, id_column=True)

        assert cloud.ids == ("a", "b")
        assert cloud.dim == 2

    def test_bare_numbers(self, tmp_path: Path):
        path = tmp_path / "cloud.csv"
        path.write_text("0,0\n1,0\n\n1,1\n", encoding="utf-8")

        cloud = artifacts.read_point_cloud(path)

        assert cloud.ids == ("0", "1", "2")
        assert len(cloud) == 3

    def test_round_trip(self, tmp_path: Path):
        original = circle(12)

        loaded = artifacts.read_point_cloud(
            artifacts.write_point_cloud(original, tmp_path / "circle.csv")
        )

        assert loaded.ids == original.ids
        assert np.array_equal(loaded.points, original.points)

    def test_empty(self, tmp_path: Path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")

        with pytest.raises(EmptyInputError):
            artifacts.read_point_cloud(path)

    def test_ragged(self, tmp_path: Path):
        path = tmp_path / "ragged.csv"
        path.write_text("0,0\n1,2,3\n", encoding="utf-8")

        with pytest.raises(DimensionMismatchError, match="ragged.csv"):
            artifacts.read_point_cloud(path)

    def test_not_numeric(self, tmp_path: Path):
        path = tmp_path / "words.csv"
        path.write_text("a,0,0\nb,1,one\n", encoding="utf-8")

        with pytest.raises(InputError, match="row 2"):
            artifacts.read_point_cloud(path, id_column=True)


def test_purity_round_trip(tmp_path: Path):
    rows = [PurityRow("A", "A", 3, 10, 0.9), PurityRow("Both", "A", 0, 0, None)]

    path = artifacts.write_purity(rows, tmp_path / "purity.csv")

    assert path.read_text(encoding="utf-8").splitlines()[2] == "Both,A,0,0,"
    assert artifacts.read_purity(path) == rows


def test_distance_table_round_trip(tmp_path: Path):
    rows = [("part-01", 0.5, 1.25), ("part-02", 0.0, math.inf)]

    path = artifacts.write_distance_table(rows, tmp_path / "distances.csv")

    assert path.read_text(encoding="utf-8").splitlines() == [
        "label,dim0,dim1",
        "part-01,0.5,1.25",
        "part-02,0.0,inf",
    ]
    assert artifacts.read_distance_table(path) == rows


def test_graph_round_trip(tmp_path: Path):
    graph = MapperGraph(
        (
            MapperNode(0, 0, ("a", "b"), {"A": 2}),
            MapperNode(1, 1, ("b", "c"), {"A": 1, "B": 1}),
        ),
        (Edge(0, 1, 1),),
    )

    path = artifacts.write_graph(graph, tmp_path / "g.json")
    assert artifacts.read_graph(path) == graph


def test_complex_round_trip(tmp_path: Path):
    fc = build_rips(DistanceMatrix(3, np.array([1.0, 2.0, 2.5])), max_dim=2)

    loaded = artifacts.read_complex(artifacts.write_complex(fc, tmp_path / "c.txt"))

    assert loaded.simplices == fc.simplices


def test_dtm_triplets(tmp_path: Path):
    corpus = Corpus((Document("x", "A", "b a"), Document("y", "A", "a")))

    artifacts.write_dtm(tfidf(corpus), tmp_path / "m.csv", tmp_path / "vocab.txt")

    lines = (tmp_path / "m.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "doc,term,weight"
    pairs = [line.split(",")[:2] for line in lines[1:]]
    assert pairs == [["x", "a"], ["x", "b"], ["y", "a"]]
    assert (tmp_path / "vocab.txt").read_text(encoding="utf-8") == "a\nb\n"


def test_corpus_files(tmp_path: Path):
    artifacts.write_corpus(
        ["one", "two"], ["A", "B"], tmp_path / "c.txt", tmp_path / "c.labels"
    )

    assert (tmp_path / "c.txt").read_text(encoding="utf-8") == "one\ntwo\n"
    assert (tmp_path / "c.labels").read_text(encoding="utf-8") == "A\nB\n"
