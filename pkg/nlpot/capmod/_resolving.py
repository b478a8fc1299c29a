from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._graph import EdgeMetric, Graph, VertexFunction, VertexSet, metric_distances
from nlpot.capmod._modulus import ModulusConfig, PathFamily, p_modulus
from nlpot.capmod._trend import TrendThresholds, Verdict, classify_resolving_trend
from nlpot.exceptions import ConfigError, EmptyTargetError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryProxy:
    """A finite stand-in for one point of the metric boundary.

    The anchor is either a set of vertices (distances measured with d_m) or a Euclidean point
    (distances measured between vertex positions, as for packings). `scales` shrink towards the
    anchor.
    """

    scales: Tuple[float, ...]
    anchor_vertices: Tuple[int, ...] = ()
    anchor_point: Tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        scales = tuple(float(s) for s in self.scales)
        if not scales:
            raise ConfigError("A boundary proxy needs at least one scale")
        if any(s <= 0 for s in scales) or any(b >= a for a, b in zip(scales, scales[1:])):
            raise ConfigError(f"scales must be positive and strictly decreasing, got {scales}")
        if (self.anchor_point is None) == (not self.anchor_vertices):
            raise ConfigError("Give exactly one of anchor_vertices and anchor_point")
        object.__setattr__(self, "scales", scales)

    @classmethod
    def at_vertices(cls, anchor: Iterable[int], scales: Sequence[float]) -> BoundaryProxy:
        return cls(tuple(scales), anchor_vertices=tuple(sorted(set(int(v) for v in anchor))))

    @classmethod
    def at_point(cls, point: Sequence[float], scales: Sequence[float]) -> BoundaryProxy:
        return cls(tuple(scales), anchor_point=tuple(float(x) for x in point))


@dataclass(frozen=True)
class ResolvingResult:
    scales: Tuple[float, ...]
    moduli: Tuple[float, ...]
    target_sizes: Tuple[int, ...]
    far: VertexSet
    verdict: Verdict


def _anchor_distances(
    g: Graph,
    m: EdgeMetric,
    proxy: BoundaryProxy,
    positions: npt.NDArray[np.float64] | None,
) -> npt.NDArray[np.float64]:
    if proxy.anchor_point is None:
        return metric_distances(g, m, proxy.anchor_vertices)
    if positions is None:
        raise ConfigError("A point anchor needs vertex positions")
    pos = np.asarray(positions, dtype=np.float64)
    if pos.shape[0] != g.vertex_count:
        raise ValueError(f"Expected {g.vertex_count} positions, got {pos.shape[0]}")
    return np.linalg.norm(pos - np.asarray(proxy.anchor_point), axis=1)


def resolving_check(
    g: Graph,
    m: EdgeMetric,
    proxy: BoundaryProxy,
    p: float,
    cfg: ModulusConfig | None = None,
    *,
    positions: npt.NDArray[np.float64] | None = None,
    far: Iterable[int] | None = None,
    thresholds: TrendThresholds | None = None,
) -> ResolvingResult:
    """Modulus of the paths from a far set into shrinking neighbourhoods of the anchor.

    The neighbourhood at scale s holds the vertices at distance <= s from the anchor. Without
    an explicit `far` set, the vertices at distance >= half the largest anchor distance are
    used (minus any vertex of the largest neighbourhood).
    """
    dist = _anchor_distances(g, m, proxy, positions)
    targets = []
    for scale in proxy.scales:
        target = np.flatnonzero(dist <= scale).astype(np.int64)
        if target.size == 0:
            raise EmptyTargetError(f"No vertex lies within {scale:g} of the anchor", scale=scale)
        targets.append(target)
    if far is None:
        finite = dist[np.isfinite(dist)]
        far_set = np.flatnonzero(dist >= 0.5 * finite.max()).astype(np.int64)
    else:
        far_set = np.unique(np.fromiter((int(v) for v in far), dtype=np.int64))
    far_set = np.setdiff1d(far_set, targets[0])
    if far_set.size == 0:
        raise ConfigError("The far set is empty once the anchor neighbourhoods are removed")
    moduli = []
    for scale, target in zip(proxy.scales, targets):
        result = p_modulus(g, PathFamily.connector(far_set.tolist(), target.tolist()), p, cfg)
        logger.debug(
            "scale %g: %d target vertices, modulus %.10g", scale, target.size, result.value
        )
        moduli.append(result.value)
    return ResolvingResult(
        scales=proxy.scales,
        moduli=tuple(moduli),
        target_sizes=tuple(int(t.size) for t in targets),
        far=far_set,
        verdict=classify_resolving_trend(moduli, thresholds),
    )


def boundary_distance_function(
    g: Graph, m: EdgeMetric, anchor: Iterable[int] | int
) -> VertexFunction:
    """f(v) = d_m(anchor, v); |df(e)| <= m(e) on every edge by the triangle inequality."""
    return metric_distances(g, m, anchor)
