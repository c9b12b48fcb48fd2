from __future__ import annotations

import io
import math
from typing import Mapping, Optional, Sequence

import matplotlib
import networkx as nx
import numpy as np
from jinja2 import Environment
from matplotlib.figure import Figure

from topotext.__version__ import __version__
from topotext.constants import BOTH, DEFAULT_SEED, FIGURE_SIZE, SVG_HASH_SALT
from topotext.diagramtools import Landscape
from topotext.mapper import MIXED_COLOR, PALETTE, MapperGraph, PurityRow
from topotext.persistence import PersistenceDiagram

DIM_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _svg(fig: Figure) -> str:
    """Serialise a figure as SVG with no timestamp and stable element ids."""
    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def _dim_color(dim: int) -> str:
    return DIM_COLORS[dim % len(DIM_COLORS)]


def barcode_svg(d: PersistenceDiagram, max_eps: float, title: str = "Barcode") -> str:
    """
    One horizontal bar per pair, dimensions stacked in bands from the top.

    Infinite bars are drawn up to `max_eps`.
    """
    fig = Figure(figsize=FIGURE_SIZE)
    ax = fig.add_subplot()
    row = 0
    ticks, labels = [], []
    for dim in d.dims():
        bars = d.in_dimension(dim)
        start = row
        for birth, death in bars:
            end = max_eps if math.isinf(death) else death
            ax.hlines(-row, birth, end, color=_dim_color(dim), linewidth=1.5)
            if math.isinf(death):
                ax.plot([end], [-row], marker=">", color=_dim_color(dim), markersize=3)
            row += 1
        ticks.append(-(start + row - 1) / 2)
        labels.append(f"H{dim}")
        row += 1
    ax.set_yticks(ticks)
    ax.set_yticklabels(labels)
    ax.set_xlim(0, max_eps * 1.05 if max_eps > 0 else 1)
    ax.set_xlabel("ε")
    ax.set_title(title)
    return _svg(fig)


def diagram_svg(
    d: PersistenceDiagram, max_eps: float, title: str = "Persistence diagram"
) -> str:
    """Birth against death per dimension, with the diagonal; infinite deaths sit on top."""
    fig = Figure(figsize=(FIGURE_SIZE[1], FIGURE_SIZE[1]))
    ax = fig.add_subplot()
    top = max_eps * 1.1 if max_eps > 0 else 1.0
    ax.plot([0, top], [0, top], color="black", linewidth=0.8)
    ax.axhline(top, color="grey", linestyle="--", linewidth=0.6)
    for dim in d.dims():
        pairs = d.in_dimension(dim)
        deaths = np.where(np.isinf(pairs[:, 1]), top, pairs[:, 1])
        ax.scatter(pairs[:, 0], deaths, s=12, color=_dim_color(dim), label=f"H{dim}")
    if len(d):
        ax.legend(loc="lower right")
    ax.set_xlim(0, top)
    ax.set_ylim(0, top * 1.02)
    ax.set_xlabel("birth")
    ax.set_ylabel("death")
    ax.set_title(title)
    return _svg(fig)


def landscape_svg(l: Landscape, title: str = "Persistence landscape") -> str:
    fig = Figure(figsize=FIGURE_SIZE)
    ax = fig.add_subplot()
    for k in range(1, l.k_max + 1):
        points = l.critical_points(k)
        if len(points):
            ax.plot(points[:, 0], points[:, 1], linewidth=1.2, label=f"λ{k}")
    if any(len(level) for level in l.levels):
        ax.legend(loc="upper right")
    ax.set_xlabel("t")
    ax.set_title(title)
    return _svg(fig)


def graph_svg(
    graph: MapperGraph,
    partition: Optional[Mapping[int, str]] = None,
    seed: int = DEFAULT_SEED,
) -> str:
    """Mapper graph with a seeded spring layout, node area by size and colour by group."""
    if partition is None:
        partition = {node.id: node.majority()[0] for node in graph.nodes}
    groups = sorted({g for g in partition.values() if g != BOTH})
    colors = {g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)}
    nxg = graph.to_networkx()
    layout = nx.spring_layout(nxg, seed=seed) if len(nxg) else {}
    largest = max((node.size for node in graph.nodes), default=1)

    fig = Figure(figsize=(FIGURE_SIZE[0], FIGURE_SIZE[0]))
    ax = fig.add_subplot()
    ax.set_axis_off()
    if len(nxg):
        nx.draw_networkx_edges(nxg, layout, ax=ax, edge_color="#999999")
        nx.draw_networkx_nodes(
            nxg,
            layout,
            ax=ax,
            node_size=[40 + 400 * node.size / largest for node in graph.nodes],
            node_color=[
                colors.get(partition.get(node.id, BOTH), MIXED_COLOR)
                for node in graph.nodes
            ],
        )
    return _svg(fig)


REPORT_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{{ title }}</title>
<style>
body { font-family: sans-serif; margin: 2em; }
table { border-collapse: collapse; margin-bottom: 2em; }
td, th { border: 1px solid #ccc; padding: 0.3em 0.6em; text-align: left; }
</style>
</head>
<body>
<h1>{{ title }}</h1>
<p>{{ graph.nodes | length }} nodes, {{ graph.edges | length }} edges, cycle rank {{ cycle_rank }}.</p>
<figure>{{ svg | safe }}</figure>
{% if purity %}
<h2>Cluster purity</h2>
<table>
<tr><th>group</th><th>label</th><th>nodes</th><th>size</th><th>ratio</th></tr>
{% for row in purity %}
<tr><td>{{ row.group }}</td><td>{{ row.label }}</td><td>{{ row.nodes }}</td><td>{{ row.size }}</td><td>{{ "%.4f" | format(row.ratio) if row.ratio is not none else "" }}</td></tr>
{% endfor %}
</table>
{% endif %}
<h2>Nodes</h2>
<table>
<tr><th>node</th><th>bin</th><th>size</th><th>group</th><th>composition</th><th>top terms</th></tr>
{% for node in graph.nodes %}
<tr>
<td>{{ node.id }}</td><td>{{ node.bin }}</td><td>{{ node.size }}</td>
<td>{{ partition.get(node.id, "") }}</td>
<td>{% for label, count in node.composition.items() %}{{ label }}: {{ count }}{% if not loop.last %}, {% endif %}{% endfor %}</td>
<td>{{ terms.get(node.id, []) | map(attribute=0) | join(", ") }}</td>
</tr>
{% endfor %}
</table>
<footer>topotext {{ version }}</footer>
</body>
</html>
"""

_environment = Environment(autoescape=True, trim_blocks=True, lstrip_blocks=True)


def html_report(
    graph: MapperGraph,
    svg: str,
    *,
    partition: Optional[Mapping[int, str]] = None,
    purity: Sequence[PurityRow] = (),
    terms: Optional[Mapping[int, Sequence[tuple[str, float]]]] = None,
    title: str = "Mapper report",
) -> str:
    """
    Static HTML page with the graph drawing, purity table and per-node terms.

    Args:
        graph: the Mapper graph.
        svg: its drawing, from [graph_svg][topotext.render.graph_svg].
        partition: node groups shown beside each node.
        purity: rows from [cluster_purity][topotext.mapper.cluster_purity].
        terms: node id → ranked terms from [term_summary][topotext.mapper.term_summary].
        title: page heading.
    """
    template = _environment.from_string(REPORT_TEMPLATE)
    return template.render(
        title=title,
        graph=graph,
        svg=svg,
        cycle_rank=graph.cycle_rank(),
        partition=dict(partition or {}),
        purity=list(purity),
        terms=dict(terms or {}),
        version=__version__,
    )
