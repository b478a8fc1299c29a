"""Blocking metrics around an accumulation point of a packing.

Coordinates are rescaled as w = (z - anchor) / unit so that the first radius is 1. For a
radius r, rho(r) is the largest s <= r/2 whose closed ball around the anchor misses every
ball of diameter >= r/2, and the radii follow r_n = rho(rho(r_(n-1))) / 2. The function

    phi = sum_n psi_(r_n)(w) / (n r_n)

is at least the harmonic number H_n on B(r_n), so every path converging to the anchor has
infinite |d phi|-length. The finite packing only supports finitely many radii; the sequence
stops, with a reason, once the next radius cannot be certified.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy import special

from nlpot._graph import EdgeMetric, Graph, Path, VertexFunction, shortest_path_between
from nlpot.exceptions import BadRadiiError, PathMismatchError
from nlpot.packing._contact import ContactGraph, packing_metric
from nlpot.packing._model import Packing

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-6
_RHO_SHRINK = 1.0 - 1e-9


def psi(
    r: float, z: npt.ArrayLike, anchor: npt.ArrayLike
) -> Union[float, npt.NDArray[np.float64]]:
    """r on B(r), 2r - |z - anchor| on the annulus r <= |z - anchor| <= 2r, 0 outside B(2r)."""
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    t = np.linalg.norm(np.asarray(z, dtype=np.float64) - np.asarray(anchor), axis=-1)
    value = np.clip(2.0 * r - t, 0.0, r)
    if np.ndim(value) == 0:
        return float(value)
    return value


def _edges_of(g: Union[Graph, ContactGraph]) -> npt.NDArray[np.int64]:
    return np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)


def _as_graph(g: Union[Graph, ContactGraph]) -> Graph:
    return g.graph if isinstance(g, ContactGraph) else g


@dataclass(frozen=True)
class BlockingRadii:
    """Radii r_1 = 1 > r_2 > ... in units of `unit` around `anchor`.

    `certificates[n]` records that no contact edge joins {|w| < 2 r_n} to {|w| >= r_(n-1)};
    the first radius has no predecessor and is always certified.
    """

    anchor: Tuple[float, ...]
    unit: float
    radii: Tuple[float, ...]
    certificates: Tuple[bool, ...]
    truncated: bool
    reason: Optional[str] = None

    def __len__(self) -> int:
        return len(self.radii)

    @property
    def certified(self) -> bool:
        return bool(self.radii) and all(self.certificates)

    def rescaled(self, points: npt.ArrayLike) -> npt.NDArray[np.float64]:
        return (np.asarray(points, dtype=np.float64) - np.asarray(self.anchor)) / self.unit

    def verify(self, p: Packing, g: Union[Graph, ContactGraph]) -> bool:
        """Re-check r_1 = 1, the halving condition and every separation certificate."""
        if not self.radii or self.radii[0] != 1.0:
            return False
        r = self.radii
        if any(not 0 < r[n] < r[n - 1] / 2 for n in range(1, len(r))):
            return False
        t = np.linalg.norm(self.rescaled(p.centers), axis=1)
        edges = _edges_of(g)
        return all(_separated(t, edges, r[n], r[n - 1]) for n in range(1, len(r)))


def _separated(
    t: npt.NDArray[np.float64], edges: npt.NDArray[np.int64], r: float, r_prev: float
) -> bool:
    inner = t < 2.0 * r
    outer = t >= r_prev
    crossing = (inner[edges[:, 0]] & outer[edges[:, 1]]) | (inner[edges[:, 1]] & outer[edges[:, 0]])
    return not bool(np.any(crossing))


def _rho(r: float, t: npt.NDArray[np.float64], r_out: npt.NDArray[np.float64]) -> float:
    big = 2.0 * r_out >= r / 2.0
    if not np.any(big):
        return r / 2.0
    gap = float(np.min(t[big] - r_out[big]))
    if gap <= 0:
        return 0.0
    return min(r / 2.0, _RHO_SHRINK * gap)


def blocking_radii(
    p: Packing,
    g: Union[Graph, ContactGraph],
    anchor: npt.ArrayLike,
    n_max: int,
    *,
    unit: float | None = None,
) -> BlockingRadii:
    """Build r_1 = 1, r_n = rho(rho(r_(n-1))) / 2 until `n_max` radii or truncation.

    `unit` defaults to half the largest distance from the anchor to a centre.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    z_p = np.asarray(anchor, dtype=np.float64).reshape(-1)
    if z_p.shape != (p.dimension,):
        raise ValueError(f"anchor must be a point of R^{p.dimension}")
    dist = np.linalg.norm(p.centers - z_p, axis=1)
    if unit is None:
        unit = 0.5 * float(dist.max())
    if not unit > 0:
        raise ValueError(f"unit must be positive, got {unit}")
    t = dist / unit
    r_out = p.r_out / unit
    edges = _edges_of(g)

    radii = [1.0]
    certificates = [True]
    reason: Optional[str] = None
    if not np.any(t < 2.0):
        reason = "B(2 r_1) contains no centre"
    while reason is None and len(radii) < n_max:
        r_prev = radii[-1]
        r = _rho(_rho(r_prev, t, r_out), t, r_out) / 2.0
        if r <= 0:
            reason = f"the anchor touches a ball of diameter >= r_{len(radii)} / 4"
        elif not np.any(t < 2.0 * r):
            reason = f"B(2 r_{len(radii) + 1}) contains no centre"
        elif not _separated(t, edges, r, r_prev):
            reason = f"separation certificate fails for r_{len(radii) + 1} = {r:.3g}"
        else:
            radii.append(r)
            certificates.append(True)
    if reason is not None:
        logger.warning("blocking radii truncated after %d terms: %s", len(radii), reason)
    else:
        logger.debug("built %d blocking radii, smallest %.3g", len(radii), radii[-1])
    return BlockingRadii(
        anchor=tuple(z_p.tolist()),
        unit=float(unit),
        radii=tuple(radii),
        certificates=tuple(certificates),
        truncated=reason is not None,
        reason=reason,
    )


def _ball_volume(d: int, r: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * r**d


def _cap_volume(
    d: int, r: npt.NDArray[np.float64], h: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    h = np.clip(h, 0.0, 2.0 * r)
    low = np.minimum(h, 2.0 * r - h)
    small = 0.5 * _ball_volume(d, r) * special.betainc(
        (d + 1) / 2.0, 0.5, np.clip((2.0 * r * low - low**2) / r**2, 0.0, 1.0)
    )
    return np.where(h <= r, small, _ball_volume(d, r) - small)


def lens_volume(
    d: int, a: npt.ArrayLike, t: npt.ArrayLike, big_r: float
) -> npt.NDArray[np.float64]:
    """Volume of B(c, a) intersected with B(0, big_r) in R^d, where |c| = t."""
    a = np.asarray(a, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    R = np.full_like(a, float(big_r))
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (t**2 + R**2 - a**2) / (2.0 * t)
        caps = _cap_volume(d, R, R - x) + _cap_volume(d, a, a - (t - x))
    volume = np.where(t >= a + R, 0.0, caps)
    volume = np.where(t <= R - a, _ball_volume(d, a), volume)
    return np.where(t <= a - R, _ball_volume(d, R), volume)


@dataclass(frozen=True)
class BlockingMetric:
    radii: BlockingRadii
    phi: VertexFunction
    metric: EdgeMetric
    dphi: npt.NDArray[np.float64]
    # index n - 1 of the only term with d phi_n(e) != 0, or -1
    support_index: npt.NDArray[np.int64]
    supports_disjoint: bool
    norm_d: float
    decomposition: Tuple[float, ...]
    constants: Tuple[float, ...]
    floor: float

    @property
    def constant(self) -> float:
        finite = [c for c in self.constants if math.isfinite(c)]
        return max(finite) if finite else math.nan


def blocking_metric(
    p: Packing,
    g: Union[Graph, ContactGraph],
    br: BlockingRadii,
    floor: float = DEFAULT_FLOOR,
    tol: float | None = None,
) -> BlockingMetric:
    """m_p = |d phi| + floor * m_pack, with the norm split over the terms of phi.

    `constants[n - 1]` is max |d phi_n(e)|^d / vol((P_u u P_v) n B(3 r_n)) over the support
    of d phi_n, with the volume measured on the inner balls, in rescaled units.
    """
    if not br.certified:
        raise BadRadiiError("Blocking radii are missing or uncertified")
    if not floor > 0:
        raise ValueError(f"floor must be positive, got {floor}")
    edges = _edges_of(g)
    m_pack = packing_metric(p, g, tol)
    d = p.dimension
    w = br.rescaled(p.centers)
    t = np.linalg.norm(w, axis=1)
    r_in = p.r_in / br.unit

    phi = np.zeros(p.count)
    hits = np.zeros(edges.shape[0], dtype=np.int64)
    support_index = np.full(edges.shape[0], -1, dtype=np.int64)
    decomposition = []
    constants = []
    for n, r in enumerate(br.radii, start=1):
        phi_n = np.clip(2.0 * r - t, 0.0, r)
        phi += phi_n / (n * r)
        dphi_n = np.abs(phi_n[edges[:, 0]] - phi_n[edges[:, 1]])
        active = dphi_n > 0
        hits += active
        support_index[active] = n - 1
        decomposition.append(float(np.sum(dphi_n**d) / (n * r) ** d))
        if np.any(active):
            u, v = edges[active, 0], edges[active, 1]
            volume = lens_volume(d, r_in[u], t[u], 3.0 * r) + lens_volume(
                d, r_in[v], t[v], 3.0 * r
            )
            constants.append(float(np.max(dphi_n[active] ** d / volume)))
        else:
            constants.append(math.nan)
    disjoint = bool(np.all(hits <= 1))
    if not disjoint:
        logger.warning("supports of the blocking terms overlap on %d edges", int(np.sum(hits > 1)))
    dphi = np.abs(phi[edges[:, 0]] - phi[edges[:, 1]])
    return BlockingMetric(
        radii=br,
        phi=phi,
        metric=dphi + floor * m_pack,
        dphi=dphi,
        support_index=support_index,
        supports_disjoint=disjoint,
        norm_d=float(np.sum(dphi**d)),
        decomposition=tuple(decomposition),
        constants=tuple(constants),
        floor=float(floor),
    )


def nearest_vertex(positions: npt.ArrayLike, point: npt.ArrayLike) -> int:
    positions = np.asarray(positions, dtype=np.float64)
    return int(np.argmin(np.linalg.norm(positions - np.asarray(point), axis=1)))


def approach_paths(
    g: Union[Graph, ContactGraph],
    positions: npt.ArrayLike,
    anchor: npt.ArrayLike,
    starts: Iterable[int] | None = None,
    *,
    count: int = 1,
) -> list[Path]:
    """Hop-shortest paths into the vertex nearest `anchor`.

    Without `starts` the `count` vertices farthest from the anchor are used.
    """
    graph = _as_graph(g)
    positions = np.asarray(positions, dtype=np.float64)
    target = nearest_vertex(positions, anchor)
    if starts is None:
        far = np.argsort(-np.linalg.norm(positions - np.asarray(anchor), axis=1), kind="stable")
        starts = far[:count].tolist()
    ones = np.ones(graph.edge_count)
    return [shortest_path_between(graph, ones, [int(s)], [target])[1] for s in starts]


@dataclass(frozen=True)
class PathProfile:
    path: Path
    partial_sums: npt.NDArray[np.float64]
    phi_values: npt.NDArray[np.float64]
    # phi(end) truncated to the first N terms, N = 1, 2, ...
    term_sums: npt.NDArray[np.float64]
    length: float
    increment: float
    telescoping_ok: bool
    harmonic: float
    slack: float

    @property
    def reaches_target(self) -> bool:
        return bool(self.phi_values[-1] >= self.harmonic - self.slack - 1e-12)


def divergence_check(
    g: Union[Graph, ContactGraph],
    m_p: EdgeMetric,
    phi: VertexFunction,
    paths: Sequence[Path | Sequence[int]],
    br: BlockingRadii,
    positions: npt.ArrayLike,
) -> list[PathProfile]:
    """Partial m_p-lengths and phi values along paths ending at the vertex nearest the anchor.

    The slack is H_N - H_(N_eff), where N_eff counts the radii r_n >= |w(end)|; every
    such term contributes exactly 1/n to phi(end).
    """
    graph = _as_graph(g)
    m_p = np.asarray(m_p, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    positions = np.asarray(positions, dtype=np.float64)
    target = nearest_vertex(positions, br.anchor)
    radii = np.asarray(br.radii)
    terms = np.arange(1, radii.size + 1)
    harmonic = float(np.sum(1.0 / terms))
    profiles = []
    for path in paths:
        vertices = path.vertices if isinstance(path, Path) else tuple(path)
        if not vertices or vertices[-1] != target:
            raise PathMismatchError(
                f"Path must end at vertex {target}, the vertex nearest the anchor"
            )
        edge_ids = graph.path_edges(vertices)
        partial = np.concatenate([[0.0], np.cumsum(m_p[edge_ids])])
        values = phi[list(vertices)]
        end = float(np.linalg.norm(br.rescaled(positions[vertices[-1]])))
        per_term = np.clip(2.0 * radii - end, 0.0, radii) / (terms * radii)
        n_eff = int(np.sum(radii >= end))
        increment = abs(float(values[-1] - values[0]))
        profiles.append(
            PathProfile(
                path=Path(tuple(int(v) for v in vertices)),
                partial_sums=partial,
                phi_values=values,
                term_sums=np.cumsum(per_term),
                length=float(partial[-1]),
                increment=increment,
                telescoping_ok=bool(partial[-1] >= increment - 1e-12),
                harmonic=harmonic,
                slack=harmonic - float(np.sum(1.0 / terms[:n_eff])),
            )
        )
    return profiles
