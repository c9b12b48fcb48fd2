"""Readers and writers for every file topotext produces or consumes."""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from topotext.complex import FiltrationComplex
from topotext.diagramtools import Landscape
from topotext.embed import Embedding
from topotext.errors import DimensionMismatchError, EmptyInputError, InputError
from topotext.mapper import MapperGraph, PurityRow
from topotext.metricspace import PointCloud
from topotext.persistence import PersistenceDiagram, PersistencePair
from topotext.textpipeline import DocumentTermMatrix
from topotext.utils import format_float, parse_float

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DIAGRAM_HEADER = ("dim", "birth", "death")
LANDSCAPE_HEADER = ("k", "t", "value")
DTM_HEADER = ("doc", "term", "weight")
DISTANCE_HEADER = ("label", "dim0", "dim1")
PURITY_HEADER = ("group", "label", "nodes", "size", "ratio")


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _write(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    logger.debug("wrote %s", path)
    return path


def _rows(text: str, header: Sequence[str], source: str) -> list[list[str]]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or tuple(cell.strip() for cell in rows[0]) != tuple(header):
        raise InputError(f"{source}: expected header {','.join(header)}")
    return rows[1:]


def diagram_to_csv(d: PersistenceDiagram) -> str:
    return _csv_text(
        DIAGRAM_HEADER,
        ((p.dim, format_float(p.birth), format_float(p.death)) for p in d),
    )


def diagram_from_csv(text: str, source: str = "<diagram>") -> PersistenceDiagram:
    pairs = []
    for number, row in enumerate(_rows(text, DIAGRAM_HEADER, source), start=2):
        try:
            dim, birth, death = row
            pair = PersistencePair(int(dim), parse_float(birth), parse_float(death))
            pairs.append(pair)
        except ValueError:
            raise InputError(f"{source}: line {number} is not dim,birth,death") from None
    return PersistenceDiagram(tuple(pairs))


def write_diagram(d: PersistenceDiagram, path: PathLike) -> Path:
    return _write(path, diagram_to_csv(d))


def read_diagram(path: PathLike) -> PersistenceDiagram:
    path = Path(path)
    return diagram_from_csv(path.read_text(encoding="utf-8"), str(path))


def landscape_to_csv(l: Landscape) -> str:
    rows = []
    for k in range(1, l.k_max + 1):
        for t, value in l.critical_points(k):
            rows.append((k, format_float(t), format_float(value)))
    return _csv_text(LANDSCAPE_HEADER, rows)


def landscape_from_csv(
    text: str, k_max: Optional[int] = None, source: str = "<landscape>"
) -> Landscape:
    points: dict[int, list[tuple[float, float]]] = {}
    for row in _rows(text, LANDSCAPE_HEADER, source):
        k, t, value = row
        points.setdefault(int(k), []).append((parse_float(t), parse_float(value)))
    k_max = max([k_max or 0, *points])
    levels = tuple(
        np.asarray(sorted(points.get(k, [])), dtype=np.float64).reshape(-1, 2)
        for k in range(1, k_max + 1)
    )
    support = [level[:, 0] for level in levels if len(level)]
    domain = (
        (float(min(s.min() for s in support)), float(max(s.max() for s in support)))
        if support
        else (0.0, 0.0)
    )
    return Landscape(levels, domain)


def write_landscape(l: Landscape, path: PathLike) -> Path:
    return _write(path, landscape_to_csv(l))


def read_landscape(path: PathLike, k_max: Optional[int] = None) -> Landscape:
    path = Path(path)
    return landscape_from_csv(path.read_text(encoding="utf-8"), k_max, str(path))


def write_embedding(lens: Embedding, path: PathLike) -> Path:
    header = ("doc_id", "x", "y")[: lens.dim + 1]
    rows = (
        (doc_id, *(format_float(v) for v in coords))
        for doc_id, coords in zip(lens.doc_ids, lens.coords)
    )
    return _write(path, _csv_text(header, rows))


def write_dtm(dtm: DocumentTermMatrix, path: PathLike, vocab_path: PathLike) -> Path:
    """Sparse `doc,term,weight` triplets in row order plus the vocabulary, one term a line."""
    coo = dtm.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    rows = (
        (dtm.doc_ids[coo.row[i]], dtm.vocab[coo.col[i]], format_float(coo.data[i]))
        for i in order
    )
    _write(vocab_path, "".join(f"{term}\n" for term in dtm.vocab))
    return _write(path, _csv_text(DTM_HEADER, rows))


def write_distance_table(
    rows: Iterable[tuple[str, float, float]], path: PathLike
) -> Path:
    return _write(
        path,
        _csv_text(
            DISTANCE_HEADER,
            ((label, format_float(d0), format_float(d1)) for label, d0, d1 in rows),
        ),
    )


def read_distance_table(path: PathLike) -> list[tuple[str, float, float]]:
    path = Path(path)
    rows = _rows(path.read_text(encoding="utf-8"), DISTANCE_HEADER, str(path))
    return [(label, parse_float(d0), parse_float(d1)) for label, d0, d1 in rows]


def _optional_float(value: Optional[float]) -> str:
    return "" if value is None else format_float(value)


def write_purity(rows: Iterable[PurityRow], path: PathLike) -> Path:
    return _write(
        path,
        _csv_text(
            PURITY_HEADER,
            (
                (r.group, r.label, r.nodes, r.size, _optional_float(r.ratio))
                for r in rows
            ),
        ),
    )


def read_purity(path: PathLike) -> list[PurityRow]:
    path = Path(path)
    rows = _rows(path.read_text(encoding="utf-8"), PURITY_HEADER, str(path))
    return [
        PurityRow(
            group, label, int(nodes), int(size), parse_float(ratio) if ratio else None
        )
        for group, label, nodes, size, ratio in rows
    ]


def write_graph(graph: MapperGraph, path: PathLike) -> Path:
    return _write(path, graph.to_json())


def read_graph(path: PathLike) -> MapperGraph:
    return MapperGraph.from_json(Path(path).read_text(encoding="utf-8"))


def write_complex(fc: FiltrationComplex, path: PathLike) -> Path:
    return _write(path, fc.dump())


def read_complex(path: PathLike) -> FiltrationComplex:
    return FiltrationComplex.load(Path(path).read_text(encoding="utf-8"))


def _is_number(cell: str) -> bool:
    try:
        parse_float(cell)
    except ValueError:
        return False
    return True


def read_point_cloud(path: PathLike, id_column: bool = False) -> PointCloud:
    """
    Read a point cloud from CSV, one point per row.

    A first row with a non-numeric coordinate is a header. The first column
    holds point ids when `id_column` is set or when the header names it `id`;
    otherwise every column is a coordinate and ids are row numbers.

    Raises:
        EmptyInputError: if the file has no points.
        DimensionMismatchError: if rows differ in length.
        InputError: if a coordinate is not a number.
    """
    path = Path(path)
    rows = [
        [cell.strip() for cell in row]
        for row in csv.reader(io.StringIO(path.read_text(encoding="utf-8")))
        if row and any(cell.strip() for cell in row)
    ]
    if rows:
        coords = rows[0][1:] if id_column else rows[0]
        if not all(_is_number(cell) for cell in coords):
            id_column = id_column or rows[0][0].lower() == "id"
            rows = rows[1:]
    if not rows:
        raise EmptyInputError(f"{path}: no points")

    ids, points = [], []
    for number, row in enumerate(rows, start=1):
        if id_column:
            ids.append(row[0])
            row = row[1:]
        try:
            points.append([parse_float(cell) for cell in row])
        except ValueError:
            raise InputError(f"{path}: row {number} is not numeric") from None
    try:
        return PointCloud.from_rows(points, ids if id_column else None)
    except DimensionMismatchError as exc:
        raise DimensionMismatchError(f"{path}: {exc}") from None


def write_point_cloud(cloud: PointCloud, path: PathLike) -> Path:
    header = ("id", *(f"x{i}" for i in range(cloud.dim)))
    rows = (
        (point_id, *(format_float(v) for v in point))
        for point_id, point in zip(cloud.ids, cloud.points)
    )
    return _write(path, _csv_text(header, rows))


def write_corpus(
    texts: Sequence[str], labels: Sequence[str], path: PathLike, label_path: PathLike
) -> Path:
    _write(label_path, "".join(f"{label}\n" for label in labels))
    return _write(path, "".join(f"{text}\n" for text in texts))
