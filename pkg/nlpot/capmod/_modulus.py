"""p-modulus of path families.

The modulus of a family of paths is

    Mod_p = min sum_e m(e)^p   subject to   length_m(path) >= 1 for every path, m >= 0

and its extremal length is 1 / Mod_p. For a finite list of constraint paths the program is
solved through its concave dual

    max  sum_k lam_k - (p - 1) sum_e (s_e / p)^(p / (p - 1)),   s = N^T lam,  lam >= 0

where N is the path/edge incidence matrix. The primal metric is recovered edgewise as
m(e) = (s_e / p)^(1 / (p - 1)) and the dual gradient is 1 - length_m(path).

Connector families (every path from A to B) are handled by constraint generation: the
shortest A-B path under the current metric is added until no path is shorter than
1 - tolerance. The reported value comes from the feasible metric rescaled so that the
shortest family path has length exactly 1, and the dual optimum is kept as a lower bound.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, List, Literal, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import optimize, sparse

from nlpot._graph import EdgeMetric, Graph, Path, VertexSet, shortest_path_between
from nlpot.capmod._trend import TrendThresholds, Verdict, classify_null_trend
from nlpot.exceptions import ConfigError, InvalidPathError, NoPathError, OverlapError
from nlpot.generators import FamilySpec

logger = logging.getLogger(__name__)

PathFamilyKind = Literal["explicit", "connector"]


@dataclass(frozen=True)
class PathFamily:
    """Either an explicit list of paths or all simple paths from `sources` to `targets`."""

    kind: PathFamilyKind
    paths: Tuple[Path, ...] = ()
    sources: Tuple[int, ...] = ()
    targets: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "connector":
            if not self.sources or not self.targets:
                raise ValueError("A connector family needs nonempty source and target sets")
            common = set(self.sources) & set(self.targets)
            if common:
                raise OverlapError(f"Source and target sets share vertices {sorted(common)[:5]}")
        elif self.kind != "explicit":
            raise ValueError(f"Unknown path family kind {self.kind!r}")

    @classmethod
    def explicit(cls, paths: Iterable[Path | Sequence[int]]) -> PathFamily:
        return cls(
            "explicit", paths=tuple(p if isinstance(p, Path) else Path.of(p) for p in paths)
        )

    @classmethod
    def connector(cls, sources: Iterable[int], targets: Iterable[int]) -> PathFamily:
        return cls(
            "connector",
            sources=tuple(sorted(set(int(v) for v in sources))),
            targets=tuple(sorted(set(int(v) for v in targets))),
        )


@dataclass(frozen=True)
class ModulusConfig:
    """Settings of `p_modulus`.

    Constraint generation stops once the shortest family path under the current metric has
    length at least 1 - tolerance. `max_rounds` bounds the number of generated paths.
    """

    tolerance: float = 1e-6
    max_rounds: int = 2000
    inner_tolerance: float = 1e-15
    max_inner_iterations: int = 20_000

    def __post_init__(self) -> None:
        if not 0 < self.tolerance < 1:
            raise ConfigError(f"tolerance must lie in (0, 1), got {self.tolerance}")
        if self.max_rounds < 1:
            raise ConfigError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if not self.inner_tolerance > 0:
            raise ConfigError(f"inner_tolerance must be positive, got {self.inner_tolerance}")
        if self.max_inner_iterations < 1:
            raise ConfigError("max_inner_iterations must be >= 1")


@dataclass(frozen=True)
class ModulusResult:
    value: float
    metric: EdgeMetric
    lower_bound: float
    paths: Tuple[Path, ...]
    multipliers: npt.NDArray[np.float64]
    rounds: int
    shortest_length: float = field(default=math.inf)

    @property
    def extremal_length(self) -> float:
        return math.inf if self.value == 0 else 1.0 / self.value

    def tight_paths(self, g: Graph, rtol: float = 1e-4) -> Tuple[Path, ...]:
        """Constraint paths whose length under `metric` is 1 within `rtol`."""
        return tuple(
            path
            for path in self.paths
            if abs(float(np.sum(self.metric[g.path_edges(path)])) - 1.0) <= rtol
        )


def _path_matrix(g: Graph, edge_lists: Sequence[npt.NDArray[np.int64]]) -> sparse.csr_matrix:
    rows = np.repeat(np.arange(len(edge_lists)), [e.size for e in edge_lists])
    cols = np.concatenate(edge_lists) if edge_lists else np.zeros(0, dtype=np.int64)
    return sparse.csr_matrix(
        (np.ones(cols.size), (rows, cols)), shape=(len(edge_lists), g.edge_count)
    )


def _metric_from_multipliers(
    incidence: sparse.csr_matrix, lam: npt.NDArray[np.float64], p: float
) -> npt.NDArray[np.float64]:
    s = np.maximum(incidence.T @ lam, 0.0)
    return (s / p) ** (1.0 / (p - 1.0))


def _solve_dual(
    incidence: sparse.csr_matrix,
    p: float,
    start: npt.NDArray[np.float64],
    cfg: ModulusConfig,
) -> Tuple[npt.NDArray[np.float64], float]:
    q = p / (p - 1.0)

    def negative_dual(lam: npt.NDArray[np.float64]) -> Tuple[float, npt.NDArray[np.float64]]:
        s = np.maximum(incidence.T @ lam, 0.0) / p
        m = s ** (1.0 / (p - 1.0))
        value = float(lam.sum() - (p - 1.0) * np.sum(s**q))
        gradient = 1.0 - incidence @ m
        return -value, -gradient

    result = optimize.minimize(
        negative_dual,
        start,
        jac=True,
        method="L-BFGS-B",
        bounds=[(0.0, None)] * start.size,
        options={
            "ftol": cfg.inner_tolerance,
            "gtol": cfg.inner_tolerance,
            "maxiter": cfg.max_inner_iterations,
            "maxcor": 30,
        },
    )
    return np.asarray(result.x, dtype=np.float64), -float(result.fun)


def _check_exponent(p: float) -> None:
    if not (math.isfinite(p) and p > 1):
        raise ConfigError(f"p must be finite and > 1, got {p}")


def _check_vertices(g: Graph, vertices: Iterable[int], what: str) -> None:
    for v in vertices:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"{what} vertex {v} is not in the graph")


def p_modulus(
    g: Graph,
    fam: PathFamily,
    p: float,
    cfg: ModulusConfig | None = None,
) -> ModulusResult:
    _check_exponent(p)
    cfg = cfg or ModulusConfig()
    if fam.kind == "explicit":
        if not fam.paths:
            return ModulusResult(0.0, np.zeros(g.edge_count), 0.0, (), np.zeros(0), 0, math.inf)
        edge_lists = [g.path_edges(path) for path in fam.paths]
        if any(edges.size == 0 for edges in edge_lists):
            raise InvalidPathError("Family paths need at least one edge")
        incidence = _path_matrix(g, edge_lists)
        start = np.full(len(edge_lists), 1.0 / len(edge_lists))
        lam, dual = _solve_dual(incidence, p, start, cfg)
        m = _metric_from_multipliers(incidence, lam, p)
        shortest = float(np.min(incidence @ m))
        return _result(m, shortest, p, dual, fam.paths, lam, 1)

    _check_vertices(g, fam.sources, "Source")
    _check_vertices(g, fam.targets, "Target")
    # the first constraint is a shortest path in hops
    length, path = shortest_path_between(g, np.ones(g.edge_count), fam.sources, fam.targets)
    if not math.isfinite(length):
        raise NoPathError(f"No path joins {fam.sources[:5]} to {fam.targets[:5]}")
    paths: List[Path] = [path]
    edge_lists = [g.path_edges(path)]
    seen = {path.vertices}
    lam = np.ones(1)
    for rounds in range(1, cfg.max_rounds + 1):
        incidence = _path_matrix(g, edge_lists)
        lam, dual = _solve_dual(incidence, p, lam, cfg)
        m = _metric_from_multipliers(incidence, lam, p)
        shortest, path = shortest_path_between(g, m, fam.sources, fam.targets)
        logger.debug(
            "modulus round %d: %d paths, dual %.10g, shortest length %.8f",
            rounds,
            len(paths),
            dual,
            shortest,
        )
        if shortest >= 1.0 - cfg.tolerance:
            break
        if path.vertices in seen:
            logger.debug("shortest path already constrained; stopping at length %.8f", shortest)
            break
        seen.add(path.vertices)
        paths.append(path)
        edge_lists.append(g.path_edges(path))
        lam = np.append(lam, 0.0)
    else:
        warnings.warn(
            f"Constraint generation stopped after {cfg.max_rounds} rounds"
            f" with shortest length {shortest:.6f}",
            RuntimeWarning,
            stacklevel=2,
        )
        logger.warning("modulus: round limit %d reached", cfg.max_rounds)
    return _result(m, shortest, p, dual, tuple(paths), lam, rounds)


def _result(
    m: npt.NDArray[np.float64],
    shortest: float,
    p: float,
    dual: float,
    paths: Tuple[Path, ...],
    lam: npt.NDArray[np.float64],
    rounds: int,
) -> ModulusResult:
    if shortest <= 0:
        raise NoPathError("The metric leaves a family path with zero length")
    metric = m / shortest
    return ModulusResult(
        value=float(np.sum(metric**p)),
        metric=metric,
        lower_bound=max(dual, 0.0),
        paths=paths,
        multipliers=lam,
        rounds=rounds,
        shortest_length=shortest,
    )


def extremal_length(
    g: Graph,
    fam: PathFamily,
    p: float,
    cfg: ModulusConfig | None = None,
) -> float:
    """1 / Mod_p, infinite for a p-null family."""
    return p_modulus(g, fam, p, cfg).extremal_length


@dataclass(frozen=True)
class NullTrend:
    family: str
    p: float
    radii: Tuple[int, ...]
    moduli: Tuple[float, ...]
    lower_bounds: Tuple[float, ...]
    verdict: Verdict


def connector_to_sphere(center: int, sphere: VertexSet) -> PathFamily:
    return PathFamily.connector([center], sphere.tolist())


def null_family_trend(
    family: FamilySpec,
    p: float,
    radii: Sequence[int],
    cfg: ModulusConfig | None = None,
    thresholds: TrendThresholds | None = None,
) -> NullTrend:
    """Modulus of the centre-to-sphere connector on growing exhaustion balls."""
    radii = tuple(int(r) for r in radii)
    if not radii or list(radii) != sorted(set(radii)) or radii[0] < 1:
        raise ConfigError(f"radii must be increasing positive integers, got {list(radii)}")
    moduli, bounds = [], []
    for radius in radii:
        exhaustion = family.exhaustion(radius)
        result = p_modulus(
            exhaustion.graph,
            connector_to_sphere(exhaustion.center, exhaustion.sphere),
            p,
            cfg,
        )
        logger.debug("%s p=%g R=%d: modulus %.10g", family, p, radius, result.value)
        moduli.append(result.value)
        bounds.append(result.lower_bound)
    verdict = classify_null_trend(radii, moduli, thresholds)
    return NullTrend(str(family), p, radii, tuple(moduli), tuple(bounds), verdict)
