from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import httpx

from topotext import io as artifacts
from topotext import render
from topotext._sync_source import CorpusSource
from topotext.__version__ import __version__
from topotext.complex import build_rips, complex_at
from topotext.config import LENSES, SYNTH_KINDS, RunConfig
from topotext.constants import UNLABELED
from topotext.diagramtools import bottleneck, landscape, mean_landscape, wasserstein
from topotext.errors import ConfigError, InputError, TopoTextError
from topotext.mapper import cluster_purity, partition_nodes, term_summary
from topotext.metricspace import PointCloud
from topotext.persistence import PersistenceDiagram
from topotext.pipeline import PersistenceBuilder, Pipeline
from topotext.synthetic import blobs, circle, two_vocabulary_corpus, unit_square
from topotext.textpipeline import Corpus, load_corpus, split_parts, take_parts
from topotext.utils import format_float

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_COMPUTATION = 4

DIAGRAM_SUFFIX = ".diagram.csv"
COMPLEX_SUFFIX = ".complex.txt"


def _is_url(value: str) -> bool:
    return value.startswith(("http://", "https://"))


def _read_lines(path: Union[str, Path]) -> list[str]:
    return [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]


def _load_corpus(config: RunConfig) -> Corpus:
    assert config.corpus is not None
    labels = config.labels
    if not _is_url(config.corpus):
        if labels is not None and _is_url(labels):
            raise ConfigError("a --labels URL needs a --corpus URL")
        return load_corpus(config.corpus, labels, label=config.label)
    remote = labels if labels is not None and _is_url(labels) else None
    with CorpusSource("") as source:
        request = source.corpus(config.corpus, remote, label=config.label)
        if labels is not None and remote is None:
            request.with_labels(Path(labels).read_bytes())
        return request.execute()


def _point_labels(config: RunConfig, cloud: PointCloud) -> Optional[tuple[str, ...]]:
    if config.labels is None:
        return None
    labels = [line for line in _read_lines(config.labels) if line]
    if len(labels) != len(cloud):
        raise InputError(f"{config.labels}: {len(labels)} labels for {len(cloud)} points")
    return tuple(labels)


def _pipelines(config: RunConfig) -> list[tuple[str, Pipeline]]:
    """One named pipeline per corpus part, or a single one for a point cloud."""
    if config.points is not None:
        cloud = artifacts.read_point_cloud(config.points, id_column=config.id_column)
        pipeline = Pipeline.from_cloud(cloud, _point_labels(config, cloud))
        if config.metric:
            pipeline.metric(config.metric)  # type: ignore[arg-type]
        return [(config.points.stem, pipeline)]
    if config.corpus is None:
        raise ConfigError("an input is required: --points or --corpus")

    corpus = _load_corpus(config)
    if config.parts is not None:
        parts = take_parts(
            corpus, config.parts, config.part_size  # type: ignore[arg-type]
        )
        if len(parts) < config.parts:
            raise InputError(
                f"{config.corpus}: {len(corpus)} documents make only {len(parts)} parts"
            )
    elif config.part_size is not None:
        parts = split_parts(corpus, config.part_size)
    else:
        parts = [corpus]
    stop_words = _read_lines(config.stop_words) if config.stop_words else None

    named = []
    for index, part in enumerate(parts, start=1):
        if len(parts) > 1 or config.part_size:
            name = f"part-{index:02d}"
        else:
            name = Path(config.corpus).stem
        pipeline = Pipeline.from_corpus(part).tfidf(stop_words)
        pipeline.metric(config.metric or "cosine")  # type: ignore[arg-type]
        named.append((name, pipeline))
    return named


def cmd_rips(config: RunConfig) -> list[Path]:
    """Write the filtration of every input and print its simplex counts."""
    written = []
    for name, pipeline in _pipelines(config):
        fc = build_rips(pipeline.distances(), config.max_dim, config.max_eps)
        path = config.out / f"{name}{COMPLEX_SUFFIX}"
        written.append(artifacts.write_complex(fc, path))
        counts = complex_at(fc, fc.max_eps)
        print(name, *counts)
    return written


def _write_landscapes(
    config: RunConfig, name: str, landscapes: dict, written: list[Path]
) -> None:
    for dim, l in landscapes.items():
        stem = config.out / f"{name}-H{dim}"
        written.append(artifacts.write_landscape(l, f"{stem}.landscape.csv"))
        svg = render.landscape_svg(l, f"{name} H{dim} landscape")
        written.append(_write_text(f"{stem}.landscape.svg", svg))


def _write_text(path: Union[str, Path], text: str) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


def _persistence_builders(config: RunConfig) -> list[tuple[str, PersistenceBuilder]]:
    if config.complex_path is not None:
        fc = artifacts.read_complex(config.complex_path)
        name = config.complex_path.name
        if name.endswith(COMPLEX_SUFFIX):
            name = name[: -len(COMPLEX_SUFFIX)]
        return [(name, PersistenceBuilder.from_complex(fc))]
    return [
        (name, pipeline.persistence(config.max_dim, config.max_eps))
        for name, pipeline in _pipelines(config)
    ]


def cmd_diagram(config: RunConfig) -> list[Path]:
    """Diagram, barcode and landscapes per part, plus mean landscapes over parts."""
    written: list[Path] = []
    per_dim: dict[int, list] = {}
    for name, builder in _persistence_builders(config):
        result = (
            builder.keep_zero_persistence(config.keep_zero)
            .landscapes(config.k_max, config.cap)
            .execute()
        )
        max_eps = result.complex.max_eps
        written.append(
            artifacts.write_diagram(
                result.diagram, config.out / f"{name}{DIAGRAM_SUFFIX}"
            )
        )
        written.append(
            _write_text(
                config.out / f"{name}.barcode.svg",
                render.barcode_svg(result.diagram, max_eps, f"{name} barcode"),
            )
        )
        written.append(
            _write_text(
                config.out / f"{name}.diagram.svg",
                render.diagram_svg(result.diagram, max_eps, f"{name} diagram"),
            )
        )
        _write_landscapes(config, name, result.landscapes, written)
        for dim, l in result.landscapes.items():
            per_dim.setdefault(dim, []).append(l)

    if len(next(iter(per_dim.values()), [])) > 1:
        means = {dim: mean_landscape(ls) for dim, ls in per_dim.items()}
        _write_landscapes(config, "mean", means, written)
    return written


def _diagram_files(directory: str) -> list[Path]:
    path = Path(directory)
    if not path.is_dir():
        raise ConfigError(f"{directory} is not a directory of diagrams")
    files = sorted(path.glob(f"*{DIAGRAM_SUFFIX}"))
    if not files:
        raise InputError(f"{directory}: no *{DIAGRAM_SUFFIX} files")
    return files


def _part_name(path: Path) -> str:
    return path.name[: -len(DIAGRAM_SUFFIX)]


def _distance(
    config: RunConfig, d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int
) -> float:
    # Every H_0 diagram carries exactly one infinite bar, so it is left out.
    drop = dim == 0
    if config.bottleneck:
        return bottleneck(d1, d2, dim, drop_essential=drop)
    return wasserstein(d1, d2, dim, config.p, drop_essential=drop)


def cmd_distance(config: RunConfig) -> list[Path]:
    """A single distance, a part-by-part table of two runs, or consecutive parts of one."""
    inputs = config.inputs
    if config.consecutive:
        if len(inputs) != 1:
            raise ConfigError("--consecutive takes one directory")
        files = _diagram_files(inputs[0])
        pairs = [
            (f"{_part_name(a)}/{_part_name(b)}", a, b) for a, b in zip(files, files[1:])
        ]
    elif config.table:
        if len(inputs) != 2:
            raise ConfigError("--table takes two directories")
        left, right = _diagram_files(inputs[0]), _diagram_files(inputs[1])
        if len(left) != len(right):
            raise ConfigError(f"part counts differ: {len(left)} and {len(right)}")
        pairs = [(_part_name(a), a, b) for a, b in zip(left, right)]
    else:
        if len(inputs) != 2:
            raise ConfigError("distance takes two diagram files")
        d1, d2 = artifacts.read_diagram(inputs[0]), artifacts.read_diagram(inputs[1])
        print(format_float(_distance(config, d1, d2, config.dim)))
        return []

    rows = []
    for label, a, b in pairs:
        d1, d2 = artifacts.read_diagram(a), artifacts.read_diagram(b)
        rows.append((label, _distance(config, d1, d2, 0), _distance(config, d1, d2, 1)))
    path = artifacts.write_distance_table(rows, config.out / "distances.csv")
    sys.stdout.write(path.read_text(encoding="utf-8"))
    return [path]


def cmd_landscape(config: RunConfig) -> list[Path]:
    """Landscapes of saved diagrams, and their mean when there are several."""
    if not config.inputs:
        raise ConfigError("landscape takes at least one diagram file")
    written: list[Path] = []
    computed = []
    for source in config.inputs:
        d = artifacts.read_diagram(source)
        l = landscape(d, config.dim, config.k_max, cap=config.cap)
        name = Path(source).name
        if name.endswith(DIAGRAM_SUFFIX):
            name = name[: -len(DIAGRAM_SUFFIX)]
        else:
            name = Path(source).stem
        _write_landscapes(config, name, {config.dim: l}, written)
        computed.append(l)
    if len(computed) > 1:
        _write_landscapes(config, "mean", {config.dim: mean_landscape(computed)}, written)
    return written


def cmd_mapper(config: RunConfig) -> list[Path]:
    """Mapper graph as JSON, DOT and SVG, an HTML report and optionally purity."""
    if config.purity and config.labels is None and config.label is None:
        raise ConfigError("--purity needs labels: pass --labels")
    name, pipeline = _pipelines(config)[0]
    builder = pipeline.mapper().cover(config.resolution, config.overlap)
    builder.cut(config.cut).workers(config.workers)
    if config.lens == "axis":
        builder.lens_axis(config.axis)
    elif config.lens == "pca":
        builder.lens_pca(config.lens_dim, config.seed)
    else:
        builder.lens_svd(config.lens_dim, config.seed)
    result = builder.execute()
    graph = result.graph

    partition = partition_nodes(graph, config.both_threshold)
    out = config.out
    written = [
        artifacts.write_graph(graph, out / "graph.json"),
        _write_text(out / "graph.dot", graph.to_dot(partition)),
        artifacts.write_embedding(result.lens, out / "lens.csv"),
    ]
    svg = render.graph_svg(graph, partition, config.seed)
    written.append(_write_text(out / "graph.svg", svg))

    purity = []
    if config.purity:
        if pipeline.corpus is not None:
            classes = [label for label in pipeline.corpus.labels if label != UNLABELED]
        else:
            classes = sorted(set(pipeline.labels or ()))
        purity = cluster_purity(graph, partition, classes)
        written.append(artifacts.write_purity(purity, out / "purity.csv"))

    terms = {}
    if pipeline.dtm is not None and config.top_terms:
        terms = {
            node.id: term_summary(node, pipeline.dtm, config.top_terms)
            for node in graph.nodes
        }
    report = render.html_report(
        graph,
        svg,
        partition=partition,
        purity=purity,
        terms=terms,
        title=f"{name} Mapper",
    )
    written.append(_write_text(out / "report.html", report))
    print(
        f"nodes={len(graph.nodes)} edges={len(graph.edges)} "
        f"components={len(graph.components())} cycle_rank={graph.cycle_rank()}"
    )
    return written


def cmd_tfidf(config: RunConfig) -> list[Path]:
    """Export the document-term matrix of every part."""
    if config.corpus is None:
        raise ConfigError("tfidf needs --corpus")
    written = []
    for name, pipeline in _pipelines(config):
        dtm = pipeline.dtm
        assert dtm is not None
        dtm_path = config.out / f"{name}.dtm.csv"
        vocab_path = config.out / f"{name}.vocab.txt"
        written.append(artifacts.write_dtm(dtm, dtm_path, vocab_path))
    return written


def cmd_synth(config: RunConfig) -> list[Path]:
    """Write reference inputs."""
    out = config.out
    if config.kind == "corpus":
        corpus = two_vocabulary_corpus(config.count or 500, seed=config.seed)
        written = [
            artifacts.write_corpus(
                corpus.texts, corpus.doc_labels, out / "corpus.txt", out / "corpus.labels"
            )
        ]
        for label in corpus.labels:
            texts = [doc.text for doc in corpus if doc.label == label]
            body = "".join(f"{t}\n" for t in texts)
            written.append(_write_text(out / f"{label}.txt", body))
        return written
    if config.kind == "circle":
        cloud = circle(config.count or 24)
        return [artifacts.write_point_cloud(cloud, out / "circle.csv")]
    if config.kind == "blobs":
        cloud, labels = blobs(config.count or 20, seed=config.seed)
        return [
            artifacts.write_point_cloud(cloud, out / "blobs.csv"),
            _write_text(out / "blobs.labels", "".join(f"{label}\n" for label in labels)),
        ]
    return [artifacts.write_point_cloud(unit_square(), out / "square.csv")]


COMMANDS: dict[str, Callable[[RunConfig], list[Path]]] = {
    "rips": cmd_rips,
    "diagram": cmd_diagram,
    "distance": cmd_distance,
    "landscape": cmd_landscape,
    "mapper": cmd_mapper,
    "tfidf": cmd_tfidf,
    "synth": cmd_synth,
}


def _add_input(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("input")
    group.add_argument("--points", type=Path, help="point cloud CSV")
    group.add_argument(
        "--id-column", action="store_true", help="the first CSV column holds point ids"
    )
    group.add_argument("--corpus", help="one document per line; a path or an http(s) URL")
    group.add_argument("--labels", help="one label per line, aligned with the input")
    group.add_argument("--label", help="label every document with this value")
    group.add_argument("--metric", choices=("euclidean", "cosine"))
    group.add_argument("--parts", type=int, help="use only the first N parts")
    group.add_argument("--part-size", type=int, help="documents per part")
    group.add_argument("--stop-words", type=Path, help="file of terms to leave out")


def _add_rips(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-dim", type=int, default=RunConfig.max_dim)
    parser.add_argument(
        "--max-eps", type=float, help="truncation scale (default: diameter)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topotext",
        description="Persistent homology and Mapper for point clouds and text.",
    )
    parser.add_argument("--version", action="version", version=f"topotext {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug"
    )
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    rips = sub.add_parser("rips", help="build the Vietoris-Rips filtration")
    _add_input(rips)
    _add_rips(rips)

    diagram = sub.add_parser("diagram", help="persistence diagrams, barcodes, landscapes")
    _add_input(diagram)
    _add_rips(diagram)
    diagram.add_argument(
        "--complex",
        dest="complex_path",
        type=Path,
        help="a filtration written by `rips`, instead of --points or --corpus",
    )
    diagram.add_argument(
        "--keep-zero", action="store_true", help="keep zero-persistence pairs"
    )
    diagram.add_argument("--k-max", type=int, default=RunConfig.k_max)
    diagram.add_argument(
        "--cap", type=float, help="death value for infinite bars in landscapes"
    )

    distance = sub.add_parser("distance", help="Wasserstein or bottleneck distances")
    distance.add_argument("inputs", nargs="+", help="diagram files or directories")
    distance.add_argument("--dim", type=int, default=RunConfig.dim)
    distance.add_argument(
        "-p", type=float, default=RunConfig.p, help="Wasserstein exponent"
    )
    distance.add_argument("--bottleneck", action="store_true")
    mode = distance.add_mutually_exclusive_group()
    mode.add_argument(
        "--table", action="store_true", help="part-by-part table of two runs"
    )
    mode.add_argument(
        "--consecutive", action="store_true", help="consecutive parts of one run"
    )

    landscape_ = sub.add_parser("landscape", help="landscapes of saved diagrams")
    landscape_.add_argument("inputs", nargs="+", help="diagram CSV files")
    landscape_.add_argument("--dim", type=int, default=RunConfig.dim)
    landscape_.add_argument("--k-max", type=int, default=RunConfig.k_max)
    landscape_.add_argument("--cap", type=float)

    mapper = sub.add_parser("mapper", help="Mapper graph and report")
    _add_input(mapper)
    mapper.add_argument("--lens", choices=LENSES, default=RunConfig.lens)
    mapper.add_argument("--lens-dim", type=int, default=RunConfig.lens_dim)
    mapper.add_argument("--axis", type=int, default=RunConfig.axis)
    mapper.add_argument("--resolution", type=int, default=RunConfig.resolution)
    mapper.add_argument("--overlap", type=float, default=RunConfig.overlap)
    mapper.add_argument(
        "--cut", default=RunConfig.cut, help="first-gap[:g], threshold:<tau> or count:<k>"
    )
    mapper.add_argument("--seed", type=int, default=RunConfig.seed)
    mapper.add_argument("--purity", action="store_true", help="write purity.csv")
    mapper.add_argument("--both-threshold", type=float, default=RunConfig.both_threshold)
    mapper.add_argument("--top-terms", type=int, default=RunConfig.top_terms)
    mapper.add_argument("--workers", type=int, default=RunConfig.workers)

    tfidf_ = sub.add_parser("tfidf", help="export the document-term matrix")
    _add_input(tfidf_)

    synth = sub.add_parser("synth", help="write reference inputs")
    synth.add_argument("kind", choices=SYNTH_KINDS)
    synth.add_argument("--count", type=int, help="documents per class or points")
    synth.add_argument("--seed", type=int, default=RunConfig.seed)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = set(RunConfig.__dataclass_fields__)
    values = {key: value for key, value in vars(args).items() if key in fields}
    if "inputs" in values:
        values["inputs"] = tuple(values["inputs"])
    return RunConfig(**values)


def _write_metadata(config: RunConfig) -> None:
    metadata = {
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config.to_dict(),
    }
    text = json.dumps(metadata, sort_keys=True, indent=2) + "\n"
    (config.out / "metadata.json").write_text(text, encoding="utf-8")


def _fail(exc: BaseException, code: int) -> int:
    print(f"topotext: {exc}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = config_from_args(args).validate()
        config.out.mkdir(parents=True, exist_ok=True)
        written = COMMANDS[config.command](config)
        _write_metadata(config)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    except (OSError, InputError, httpx.HTTPError) as exc:
        return _fail(exc, EXIT_IO)
    except TopoTextError as exc:
        return _fail(exc, EXIT_COMPUTATION)
    logger.info("%s wrote %d file(s) to %s", config.command, len(written), config.out)
    return 0
