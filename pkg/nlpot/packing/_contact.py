from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from nlpot._graph import EdgeMetric, Graph
from nlpot.exceptions import GraphMismatchError
from nlpot.packing._model import Packing

logger = logging.getLogger(__name__)

DEFAULT_TANGENCY_TOL = 1e-9


@dataclass(frozen=True)
class Overlap:
    u: int
    v: int
    depth: float


@dataclass(frozen=True)
class PackingReport:
    violations: Tuple[Overlap, ...]
    roundness: float

    @property
    def valid(self) -> bool:
        return not self.violations


def _candidate_pairs(centers: npt.NDArray[np.float64], reach: float) -> npt.NDArray[np.int64]:
    if centers.shape[0] < 2:
        return np.zeros((0, 2), dtype=np.int64)
    pairs = cKDTree(centers).query_pairs(reach, output_type="ndarray")
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def verify_packing(p: Packing, tol: float = 0.0) -> PackingReport:
    """Every pair whose inner balls overlap by more than `tol`."""
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    pairs = _candidate_pairs(p.centers, 2.0 * float(p.r_in.max(initial=0.0)))
    dist = np.linalg.norm(p.centers[pairs[:, 0]] - p.centers[pairs[:, 1]], axis=1)
    depth = p.r_in[pairs[:, 0]] + p.r_in[pairs[:, 1]] - dist
    bad = np.flatnonzero(depth > tol)
    violations = tuple(
        Overlap(int(pairs[i, 0]), int(pairs[i, 1]), float(depth[i])) for i in bad.tolist()
    )
    if violations:
        logger.debug("packing has %d overlapping pairs", len(violations))
    return PackingReport(violations, p.roundness)


@dataclass(frozen=True)
class ContactGraph:
    """Tangency graph of a packing: vertex i is ball i, edges sorted as (u, v) with u < v.

    Finite packings need not be connected, so the edge list is kept apart from `Graph`.
    """

    vertex_count: int
    edges: npt.NDArray[np.int64]
    tolerance: float

    @cached_property
    def graph(self) -> Graph:
        """The contact graph as a `Graph`; raises `DisconnectedError` if it is not connected."""
        return Graph(self.vertex_count, self.edges)

    @property
    def degrees(self) -> npt.NDArray[np.int64]:
        return np.bincount(self.edges.reshape(-1), minlength=self.vertex_count)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.vertex_count else 0

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for u, v in self.edges.tolist()}


def contact_graph(p: Packing, tol: float = DEFAULT_TANGENCY_TOL) -> ContactGraph:
    """Edge iff the outer spheres touch: | |z(u) - z(v)| - (r_out(u) + r_out(v)) | <= tol."""
    pairs = _candidate_pairs(p.centers, 2.0 * float(p.r_out.max(initial=0.0)) + tol)
    dist = np.linalg.norm(p.centers[pairs[:, 0]] - p.centers[pairs[:, 1]], axis=1)
    gap = np.abs(dist - (p.r_out[pairs[:, 0]] + p.r_out[pairs[:, 1]]))
    return ContactGraph(p.count, pairs[gap <= tol], tol)


GraphLike = Union[Graph, ContactGraph]


def packing_metric(p: Packing, g: GraphLike, tol: float | None = None) -> EdgeMetric:
    """m(e) = diam(P_u) + diam(P_v), indexed like the edges of `g`."""
    tol = g.tolerance if tol is None and isinstance(g, ContactGraph) else tol
    tol = DEFAULT_TANGENCY_TOL if tol is None else tol
    if g.vertex_count != p.count:
        raise GraphMismatchError(f"Graph has {g.vertex_count} vertices, packing {p.count} balls")
    edges = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    expected = contact_graph(p, tol).edge_set()
    given = {(min(u, v), max(u, v)) for u, v in edges.tolist()}
    if given != expected:
        missing, extra = expected - given, given - expected
        raise GraphMismatchError(
            f"Not the contact graph: {len(missing)} tangencies missing, {len(extra)} edges"
            f" between non-tangent balls"
        )
    return 2.0 * p.r_out[edges[:, 0]] + 2.0 * p.r_out[edges[:, 1]]


def metric_lp_norm(m: EdgeMetric, p: float) -> float:
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(np.sum(np.asarray(m, dtype=np.float64) ** p) ** (1.0 / p))


def packing_metric_bound(p: Packing, g: GraphLike) -> float:
    """4^d sum_v (deg v + 1) r_out(v)^d, an upper bound for sum_e m(e)^d."""
    d = p.dimension
    degrees = np.bincount(np.asarray(g.edges).reshape(-1), minlength=p.count)
    return float(4.0**d * np.sum((degrees + 1) * p.r_out**d))
