from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Literal, Mapping, Tuple

import numpy as np

from nlpot._graph import Graph, VertexSet, hop_distances, induced_subgraph

Family = Literal["lattice", "tree", "product", "tessellation", "disk", "random"]


@dataclass(frozen=True)
class GeneratedGraph:
    """A graph produced by one of the generators, with its provenance.

    `graph.labels` holds the per-vertex coordinates (lattice points, tree addresses,
    product pairs, (layer, index) pairs or axial hex coordinates).
    """

    graph: Graph
    family: Family
    params: Mapping[str, Any]
    center: int = 0
    # planar families only: oriented faces and the outer boundary cycle (both counterclockwise)
    faces: Tuple[Tuple[int, ...], ...] | None = None
    boundary: Tuple[int, ...] | None = None
    # trees: the leaves at full depth
    marked: Tuple[int, ...] = field(default=())
    # products: the generated factors
    factors: Tuple[GeneratedGraph, ...] = field(default=())

    @property
    def labels(self) -> Tuple[Hashable, ...]:
        assert self.graph.labels is not None
        return self.graph.labels

    def vertex_of(self, label: Hashable) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class Exhaustion:
    """The hop ball of radius R around a family's centre, as a standalone graph."""

    graph: Graph
    host_vertices: VertexSet
    center: int
    sphere: VertexSet
    radius: int


def exhaustion_ball(gen: GeneratedGraph, radius: int) -> Exhaustion:
    dist = hop_distances(gen.graph, gen.center)
    sub, host = induced_subgraph(gen.graph, np.flatnonzero(dist <= radius))
    local = dist[host]
    return Exhaustion(
        graph=sub,
        host_vertices=host,
        center=int(np.searchsorted(host, gen.center)),
        sphere=np.flatnonzero(local == radius).astype(np.int64),
        radius=radius,
    )
