"""Plain-text formats.

Graph:

    # comment
    graph <n_vertices> <n_edges>
    u v [m]

Vertex function: one `vertex value` line per vertex.

Floats are written with `repr`, the shortest string that round-trips exactly.
"""
from __future__ import annotations

from typing import Iterable, Sequence, TextIO

import numpy as np

from nlpot._graph import EdgeMetric, Graph, VertexFunction, as_edge_metric, build_graph
from nlpot.exceptions import FormatError


def _content_lines(lines: Iterable[str]) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def format_float(x: float) -> str:
    return repr(float(x))


def write_graph(
    out: TextIO,
    g: Graph,
    m: EdgeMetric | None = None,
    *,
    comments: Sequence[str] = (),
) -> None:
    for comment in comments:
        out.write(f"# {comment}\n")
    if g.labels is not None:
        for v, label in enumerate(g.labels):
            out.write(f"# label {v} {label!r}\n")
    out.write(f"graph {g.vertex_count} {g.edge_count}\n")
    for idx, (u, v) in enumerate(g.edges.tolist()):
        if m is None:
            out.write(f"{u} {v}\n")
        else:
            out.write(f"{u} {v} {format_float(m[idx])}\n")


def read_graph_lines(
    lines: Iterable[str],
) -> tuple[Graph, EdgeMetric | None, list[tuple[int, str]]]:
    """Parse a graph; lines the graph grammar does not know are returned for the caller."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    extra: list[tuple[int, str]] = []
    for lineno, line in _content_lines(lines):
        parts = line.split()
        if header is None:
            if parts[0] != "graph" or len(parts) != 3:
                raise FormatError(f"line {lineno}: expected 'graph <n> <m>', got {line!r}")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise FormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        if ":" in parts[0]:
            extra.append((lineno, line))
            continue
        if len(parts) not in (2, 3):
            raise FormatError(f"line {lineno}: expected 'u v [m]', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
            if len(parts) == 3:
                weights.append(float(parts[2]))
        except ValueError:
            raise FormatError(f"line {lineno}: bad edge {line!r}") from None
    if header is None:
        raise FormatError("missing 'graph <n> <m>' header")
    n_vertices, n_edges = header
    if len(edges) != n_edges:
        raise FormatError(f"header announces {n_edges} edges, found {len(edges)}")
    if weights and len(weights) != len(edges):
        raise FormatError("either every edge or no edge must carry a metric value")
    g = build_graph(edges, vertex_count=n_vertices)
    metric = as_edge_metric(g, np.asarray(weights)) if weights else None
    return g, metric, extra


def read_graph(source: TextIO) -> tuple[Graph, EdgeMetric | None]:
    g, metric, extra = read_graph_lines(source)
    if extra:
        lineno, line = extra[0]
        raise FormatError(f"line {lineno}: unexpected {line!r}")
    return g, metric


def write_vertex_function(out: TextIO, f: VertexFunction) -> None:
    for v, value in enumerate(np.asarray(f, dtype=np.float64).tolist()):
        out.write(f"{v} {format_float(value)}\n")


def read_vertex_function(
    source: TextIO, vertex_count: int, *, partial: bool = False
) -> VertexFunction:
    """`vertex value` lines; with `partial` the vertices without a line are left as nan."""
    values = np.full(vertex_count, np.nan)
    for lineno, line in _content_lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'vertex value', got {line!r}")
        try:
            v, value = int(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: bad entry {line!r}") from None
        if not 0 <= v < vertex_count:
            raise FormatError(f"line {lineno}: vertex {v} out of range")
        values[v] = value
    if not partial and np.isnan(values).any():
        missing = int(np.flatnonzero(np.isnan(values))[0])
        raise FormatError(f"no value for vertex {missing}")
    return values
