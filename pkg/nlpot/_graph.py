from __future__ import annotations

import heapq
import math
import sys
from typing import Hashable, Iterable, NamedTuple, Sequence, Tuple

import networkx as nx
import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse import csgraph

from nlpot.exceptions import (
    DisconnectedError,
    DuplicateEdgeError,
    GraphError,
    InvalidPathError,
    LoopEdgeError,
)

if sys.version_info < (3, 10):  # pragma: no cover
    from typing_extensions import TypeAlias
else:  # pragma: no cover
    from typing import TypeAlias

VertexFunction: TypeAlias = npt.NDArray[np.float64]
"""One finite real per vertex, indexed by vertex id."""

EdgeMetric: TypeAlias = npt.NDArray[np.float64]
"""One strictly positive real per edge, indexed like `Graph.edges`."""

VertexSet: TypeAlias = npt.NDArray[np.int64]
"""Sorted array of distinct vertex ids."""

# csgraph drops explicit zeros, so vanishing weights are lifted to the smallest normal float
_TINY = np.finfo(np.float64).tiny


class Path(NamedTuple):
    """An ordered vertex sequence; consecutive vertices must be adjacent and no edge may repeat."""

    vertices: Tuple[int, ...]

    @classmethod
    def of(cls, vertices: Iterable[int]) -> Path:
        return cls(tuple(int(v) for v in vertices))


class Graph:
    """Finite, simple, connected, undirected graph on the vertices 0..n-1.

    Instances are immutable; construct them with `build_graph` or the generators.
    `edges[i]` is stored as `(u, v)` with `u < v` and the edge order of the input is kept,
    so metrics can be indexed by edge id.
    """

    __slots__ = (
        "vertex_count",
        "edges",
        "labels",
        "_indptr",
        "_indices",
        "_edge_ids",
        "_edge_index",
        "_adjacency",
        "_incidence",
    )

    vertex_count: int
    edges: npt.NDArray[np.int64]
    labels: tuple[Hashable, ...] | None

    def __init__(
        self,
        vertex_count: int,
        edges: npt.ArrayLike,
        labels: Sequence[Hashable] | None = None,
    ) -> None:
        edge_array = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if vertex_count < 1:
            raise GraphError("A graph needs at least one vertex")
        if edge_array.size and (
            edge_array.min() < 0 or edge_array.max() >= vertex_count
        ):
            raise GraphError(
                f"Edge endpoints must lie in [0, {vertex_count}),"
                f" got range [{edge_array.min()}, {edge_array.max()}]"
            )
        loops = np.flatnonzero(edge_array[:, 0] == edge_array[:, 1])
        if loops.size:
            v = int(edge_array[loops[0], 0])
            raise LoopEdgeError(f"Edge ({v}, {v}) is a loop")
        edge_array = np.sort(edge_array, axis=1)
        edge_index: dict[tuple[int, int], int] = {}
        for idx, (u, v) in enumerate(edge_array.tolist()):
            if (u, v) in edge_index:
                raise DuplicateEdgeError(f"Edge ({u}, {v}) appears more than once")
            edge_index[(u, v)] = idx
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != vertex_count:
                raise GraphError(
                    f"Got {len(labels)} labels for {vertex_count} vertices"
                )

        edge_array.setflags(write=False)
        self.vertex_count = vertex_count
        self.edges = edge_array
        self.labels = labels
        self._edge_index = edge_index

        n_edges = edge_array.shape[0]
        rows = np.concatenate([edge_array[:, 0], edge_array[:, 1]])
        cols = np.concatenate([edge_array[:, 1], edge_array[:, 0]])
        eids = np.concatenate([np.arange(n_edges), np.arange(n_edges)])
        order = np.lexsort((cols, rows))
        self._indices = cols[order]
        self._edge_ids = eids[order]
        self._indptr = np.concatenate(
            [[0], np.cumsum(np.bincount(rows, minlength=vertex_count))]
        ).astype(np.int64)
        self._adjacency = sparse.csr_matrix(
            (np.ones(2 * n_edges), self._indices, self._indptr),
            shape=(vertex_count, vertex_count),
        )
        self._incidence = sparse.csr_matrix(
            (
                np.concatenate([-np.ones(n_edges), np.ones(n_edges)]),
                (
                    np.concatenate([np.arange(n_edges), np.arange(n_edges)]),
                    np.concatenate([edge_array[:, 0], edge_array[:, 1]]),
                ),
            ),
            shape=(n_edges, vertex_count),
        )

        if vertex_count > 1:
            n_components, _ = csgraph.connected_components(
                self._adjacency, directed=False
            )
            if n_components != 1:
                raise DisconnectedError(
                    f"Graph on {vertex_count} vertices has {n_components} components"
                )

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degrees(self) -> npt.NDArray[np.int64]:
        return np.diff(self._indptr)

    def degree(self, v: int) -> int:
        return int(self._indptr[v + 1] - self._indptr[v])

    def neighbors(self, v: int) -> npt.NDArray[np.int64]:
        """Neighbours of `v` in increasing order."""
        return self._indices[self._indptr[v] : self._indptr[v + 1]]

    def adjacency_lists(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.vertex_count)]

    def edge_id(self, u: int, v: int) -> int | None:
        return self._edge_index.get((u, v) if u < v else (v, u))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    @property
    def adjacency_matrix(self) -> sparse.csr_matrix:
        return self._adjacency

    @property
    def incidence(self) -> sparse.csr_matrix:
        """Oriented incidence matrix D with (Df)[e] = f(v) - f(u) for e = (u, v)."""
        return self._incidence

    @property
    def csr(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], npt.NDArray[np.int64]]:
        """(indptr, neighbour indices, edge ids) of the symmetric adjacency structure."""
        return self._indptr, self._indices, self._edge_ids

    def weighted_matrix(self, m: EdgeMetric) -> sparse.csr_matrix:
        weights = np.maximum(np.asarray(m, dtype=np.float64)[self._edge_ids], _TINY)
        return sparse.csr_matrix(
            (weights, self._indices, self._indptr),
            shape=(self.vertex_count, self.vertex_count),
        )

    def path_edges(self, path: Path | Sequence[int]) -> npt.NDArray[np.int64]:
        """Edge ids traversed by `path`, validating it."""
        vertices = path.vertices if isinstance(path, Path) else tuple(path)
        if not vertices:
            raise InvalidPathError("A path needs at least one vertex")
        for v in vertices:
            if not 0 <= v < self.vertex_count:
                raise InvalidPathError(f"Vertex {v} is not in the graph")
        ids: list[int] = []
        for u, v in zip(vertices[:-1], vertices[1:]):
            eid = self.edge_id(u, v)
            if eid is None:
                raise InvalidPathError(f"Vertices {u} and {v} are not adjacent")
            ids.append(eid)
        if len(set(ids)) != len(ids):
            raise InvalidPathError("Path repeats an edge")
        return np.asarray(ids, dtype=np.int64)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges.tolist())
        return g

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(vertices={self.vertex_count}, edges={self.edge_count})"


def build_graph(
    edge_list: Iterable[tuple[int, int]],
    *,
    vertex_count: int | None = None,
    labels: Sequence[Hashable] | None = None,
) -> Graph:
    """Validate an edge list and build a connected `Graph`.

    Vertex ids must be dense in [0, n): with no explicit `vertex_count` n is one more than
    the largest endpoint.
    """
    edges = np.asarray(list(edge_list), dtype=np.int64).reshape(-1, 2)
    if vertex_count is None:
        if edges.size == 0:
            raise GraphError("Cannot infer the vertex count of an empty edge list")
        vertex_count = int(edges.max()) + 1
    return Graph(vertex_count, edges, labels)


def as_vertex_function(g: Graph, f: npt.ArrayLike) -> VertexFunction:
    values = np.asarray(f, dtype=np.float64)
    if values.shape != (g.vertex_count,):
        raise ValueError(
            f"Expected {g.vertex_count} vertex values, got shape {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise ValueError("Vertex function values must be finite")
    return values


def as_edge_metric(g: Graph, m: npt.ArrayLike) -> EdgeMetric:
    values = np.asarray(m, dtype=np.float64)
    if values.shape != (g.edge_count,):
        raise ValueError(f"Expected {g.edge_count} edge values, got shape {values.shape}")
    if not np.all(values > 0) or not np.all(np.isfinite(values)):
        raise ValueError("Edge metric values must be finite and strictly positive")
    return values


def natural_metric(g: Graph) -> EdgeMetric:
    return np.ones(g.edge_count)


def path_length(g: Graph, m: EdgeMetric, path: Path | Sequence[int]) -> float:
    """Sum of `m` over the edges of `path`; a single vertex has length 0."""
    return float(np.sum(np.asarray(m, dtype=np.float64)[g.path_edges(path)]))


def metric_distances(
    g: Graph, m: EdgeMetric, sources: int | Iterable[int]
) -> npt.NDArray[np.float64]:
    """d_m from the nearest of `sources` to every vertex."""
    indices = [sources] if isinstance(sources, (int, np.integer)) else list(sources)
    if not indices:
        raise ValueError("At least one source vertex is required")
    dist = csgraph.dijkstra(
        g.weighted_matrix(m), directed=True, indices=indices, min_only=True
    )
    return np.asarray(dist, dtype=np.float64)


def metric_distance(g: Graph, m: EdgeMetric, u: int, v: int) -> float:
    if u == v:
        return 0.0
    return float(metric_distances(g, m, u)[v])


def shortest_path_between(
    g: Graph, m: EdgeMetric, sources: Iterable[int], targets: Iterable[int]
) -> tuple[float, Path]:
    """Shortest m-path from the source set to the target set.

    Sources are collapsed into one super source. Ties are broken towards the smallest vertex
    id, both among equally near targets and among equally short predecessors.
    """
    source_list = sorted(set(int(s) for s in sources))
    target_set = set(int(t) for t in targets)
    if not source_list or not target_set:
        raise ValueError("Both the source and the target set must be non-empty")
    weights = np.maximum(np.asarray(m, dtype=np.float64), _TINY)
    indptr, indices, edge_ids = g.csr
    dist = np.full(g.vertex_count, math.inf)
    pred = np.full(g.vertex_count, -1, dtype=np.int64)
    done = np.zeros(g.vertex_count, dtype=bool)
    dist[source_list] = 0.0
    heap = [(0.0, s) for s in source_list]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        if v in target_set:
            # vertices leave the heap in (distance, id) order
            break
        for k in range(indptr[v], indptr[v + 1]):
            w = int(indices[k])
            if done[w]:
                continue
            nd = d + float(weights[edge_ids[k]])
            if nd < dist[w] or (nd == dist[w] and v < pred[w]):
                dist[w], pred[w] = nd, v
                heapq.heappush(heap, (nd, w))
    else:
        return math.inf, Path(())
    vertices = [v]
    while pred[vertices[-1]] >= 0:
        vertices.append(int(pred[vertices[-1]]))
    vertices.reverse()
    return float(dist[v]), Path(tuple(vertices))


def hop_distances(g: Graph, center: int) -> npt.NDArray[np.float64]:
    """Number of edges on a shortest path from `center`; `inf` never occurs (connected)."""
    return np.asarray(
        csgraph.shortest_path(
            g.adjacency_matrix, method="D", unweighted=True, indices=center
        ),
        dtype=np.float64,
    )


def ball(g: Graph, center: int, radius: int) -> VertexSet:
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    return np.flatnonzero(hop_distances(g, center) <= radius).astype(np.int64)


def sphere(g: Graph, center: int, radius: int) -> VertexSet:
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    return np.flatnonzero(hop_distances(g, center) == radius).astype(np.int64)


def gradient_abs(
    g: Graph, f: VertexFunction, m: EdgeMetric | None = None
) -> npt.NDArray[np.float64]:
    """|f(v) - f(u)| / m(e) per edge (natural metric when `m` is omitted)."""
    df = np.abs(g.incidence @ np.asarray(f, dtype=np.float64))
    if m is None:
        return df
    return df / np.asarray(m, dtype=np.float64)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, VertexSet]:
    """Subgraph induced on `vertices` plus the map from new ids to host ids.

    New ids follow increasing host id, and host labels are carried over.
    """
    keep = np.unique(np.fromiter((int(v) for v in vertices), dtype=np.int64))
    position = np.full(g.vertex_count, -1, dtype=np.int64)
    position[keep] = np.arange(keep.size)
    mapped = position[g.edges]
    inside = np.all(mapped >= 0, axis=1)
    labels = None if g.labels is None else [g.labels[v] for v in keep.tolist()]
    return Graph(int(keep.size), mapped[inside], labels), keep


def induced_edge_ids(g: Graph, vertices: VertexSet) -> npt.NDArray[np.int64]:
    """Host edge ids of the subgraph induced on `vertices`, in host edge order."""
    member = np.zeros(g.vertex_count, dtype=bool)
    member[vertices] = True
    return np.flatnonzero(member[g.edges[:, 0]] & member[g.edges[:, 1]]).astype(np.int64)


def bilipschitz_constant(m: EdgeMetric, m2: EdgeMetric) -> float:
    """Smallest L with m <= L m2 and m2 <= L m edgewise."""
    a = np.asarray(m, dtype=np.float64)
    b = np.asarray(m2, dtype=np.float64)
    return float(max(np.max(a / b), np.max(b / a)))
