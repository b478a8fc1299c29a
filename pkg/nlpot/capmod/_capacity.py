from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph, VertexFunction
from nlpot.exceptions import ConfigError, OverlapError
from nlpot.generators import FamilySpec, tree_layer_sizes
from nlpot.generators._tree import TreeKind
from nlpot.potential import (
    DirichletProblem,
    SolverConfig,
    dirichlet_energy,
    harmonic_residual,
    solve_dirichlet,
)

logger = logging.getLogger(__name__)


def _vertex_set(g: Graph, vertices: npt.ArrayLike, name: str) -> npt.NDArray[np.int64]:
    arr = np.unique(np.asarray(vertices, dtype=np.int64).reshape(-1))
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if arr[0] < 0 or arr[-1] >= g.vertex_count:
        raise ValueError(f"{name} contains vertices outside the graph")
    return arr


def _solver_config(p: float, cfg: SolverConfig | None) -> SolverConfig:
    return SolverConfig(p=p) if cfg is None else replace(cfg, p=p)


@dataclass(frozen=True)
class Capacitor:
    """The minimiser of D_p with f = 1 on A and f = 0 on B, and its energy."""

    value: float
    potential: VertexFunction
    residual: float


def capacitor(
    g: Graph,
    A: npt.ArrayLike,
    B: npt.ArrayLike,
    p: float,
    cfg: SolverConfig | None = None,
) -> Capacitor:
    a = _vertex_set(g, A, "A")
    b = _vertex_set(g, B, "B")
    overlap = np.intersect1d(a, b)
    if overlap.size:
        raise OverlapError(f"A and B share {overlap.size} vertices, e.g. {int(overlap[0])}")
    cfg = _solver_config(p, cfg)
    problem = DirichletProblem(
        g, np.concatenate([a, b]), np.concatenate([np.ones(a.size), np.zeros(b.size)])
    )
    interior = problem.interior
    if interior.size == 0:
        f = problem.extend()
    else:
        f = solve_dirichlet(problem, cfg)
    return Capacitor(
        value=dirichlet_energy(g, f, p),
        potential=f,
        residual=harmonic_residual(g, f, interior, p),
    )


def p_capacity(
    g: Graph,
    A: npt.ArrayLike,
    B: npt.ArrayLike,
    p: float,
    cfg: SolverConfig | None = None,
) -> float:
    """min D_p(f) over f with f = 1 on A and f = 0 on B."""
    return capacitor(g, A, B, p, cfg).value


def tree_capacity(branching: int, depth: int, p: float, kind: TreeKind = "rooted") -> float:
    """Closed form of p_capacity(root, leaves) on `regular_tree(branching, depth, kind=kind)`.

    With N_k edges between levels k-1 and k the minimiser only depends on the level, which
    gives (sum_k N_k^(-1/(p-1)))^(1-p).
    """
    if p <= 1:
        raise ValueError(f"p must be > 1, got {p}")
    edges_per_level = np.asarray(tree_layer_sizes(branching, depth, kind)[1:], dtype=np.float64)
    return float(np.sum(edges_per_level ** (-1.0 / (p - 1.0))) ** (1.0 - p))


@dataclass(frozen=True)
class CapacityCurve:
    """cap_p({centre}, sphere(R)) on the exhaustion balls of a family, one entry per radius."""

    family: str
    p: float
    radii: Tuple[int, ...]
    capacities: Tuple[float, ...]
    residuals: Tuple[float, ...]
    vertex_counts: Tuple[int, ...]

    def is_nonincreasing(self, rtol: float = 1e-6) -> bool:
        values = np.asarray(self.capacities)
        return bool(np.all(values[1:] <= values[:-1] * (1 + rtol)))


def _check_radii(radii: Sequence[int]) -> Tuple[int, ...]:
    radii = tuple(int(r) for r in radii)
    if not radii or any(r < 1 for r in radii) or list(radii) != sorted(set(radii)):
        raise ConfigError(f"radii must be increasing positive integers, got {list(radii)}")
    return radii


def capacity_curve(
    family: FamilySpec,
    p: float,
    radii: Sequence[int],
    cfg: SolverConfig | None = None,
) -> CapacityCurve:
    radii = _check_radii(radii)
    capacities, residuals, counts = [], [], []
    for radius in radii:
        exhaustion = family.exhaustion(radius)
        result = capacitor(exhaustion.graph, [exhaustion.center], exhaustion.sphere, p, cfg)
        logger.debug(
            "%s p=%g R=%d: capacity %.10g (residual %.2e, %d vertices)",
            family,
            p,
            radius,
            result.value,
            result.residual,
            exhaustion.graph.vertex_count,
        )
        capacities.append(result.value)
        residuals.append(result.residual)
        counts.append(exhaustion.graph.vertex_count)
    return CapacityCurve(
        family=str(family),
        p=p,
        radii=radii,
        capacities=tuple(capacities),
        residuals=tuple(residuals),
        vertex_counts=tuple(counts),
    )
