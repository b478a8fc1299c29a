from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import List, Literal

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from nlpot._graph import Graph, VertexFunction, VertexSet
from nlpot._utils.coloring import color_classes
from nlpot.exceptions import ConfigError, MaxSweepsExceededError, NoInteriorWarning
from nlpot.potential._energy import dirichlet_energy, p_laplacian, signed_power

logger = logging.getLogger(__name__)

SolverMethod = Literal["auto", "coordinate", "newton"]

MIN_EXPONENT = 1.01

# above this many interior vertices "auto" prefers Newton steps at every p
NEWTON_INTERIOR_SIZE = 1000


@dataclass(frozen=True)
class SolverConfig:
    """Settings of the p-harmonic Dirichlet solver.

    Convergence is declared when max |Delta_p f| over the interior is at most `tolerance`.
    `method="coordinate"` runs exact coordinate minimisation sweeps (one bisection per vertex,
    interior vertices visited colour class by colour class). `method="newton"` runs damped
    Newton steps whose Hessian uses the smoothed weights (|df|^2 + epsilon^2)^((p-2)/2) and
    finishes with coordinate sweeps if it stalls. `method="auto"` uses Newton for p < 2, where
    coordinate sweeps converge sublinearly, and for problems with more than
    `NEWTON_INTERIOR_SIZE` interior vertices; otherwise it runs coordinate sweeps.
    """

    p: float
    tolerance: float = 1e-9
    max_sweeps: int = 100_000
    epsilon: float = 1e-12
    method: SolverMethod = "auto"
    bisection_steps: int = 50
    max_newton_steps: int = 200

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and self.p > MIN_EXPONENT):
            raise ConfigError(f"p must be finite and > {MIN_EXPONENT}, got {self.p}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if not self.epsilon >= 0:
            raise ConfigError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.max_sweeps < 1:
            raise ConfigError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        if self.bisection_steps < 1:
            raise ConfigError(f"bisection_steps must be >= 1, got {self.bisection_steps}")
        if self.method not in ("auto", "coordinate", "newton"):
            raise ConfigError(f"unknown solver method {self.method!r}")


@dataclass(frozen=True)
class DirichletProblem:
    """Find f with f = values on `boundary` and Delta_p f = 0 on every other vertex."""

    graph: Graph
    boundary: VertexSet
    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        boundary = np.asarray(self.boundary, dtype=np.int64).reshape(-1)
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if boundary.size == 0:
            raise ValueError("The boundary set must not be empty")
        if boundary.size != values.size:
            raise ValueError(f"Got {values.size} boundary values for {boundary.size} vertices")
        if np.unique(boundary).size != boundary.size:
            raise ValueError("Boundary vertices must be distinct")
        if boundary.min() < 0 or boundary.max() >= self.graph.vertex_count:
            raise ValueError("Boundary vertices must belong to the graph")
        if not np.all(np.isfinite(values)):
            raise ValueError("Boundary values must be finite")
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "values", values)

    @property
    def interior(self) -> VertexSet:
        mask = np.ones(self.graph.vertex_count, dtype=bool)
        mask[self.boundary] = False
        return np.flatnonzero(mask).astype(np.int64)

    def extend(self, interior_values: float | npt.ArrayLike = 0.0) -> VertexFunction:
        """A full vertex function carrying the boundary data."""
        f = np.empty(self.graph.vertex_count)
        f[self.interior] = interior_values
        f[self.boundary] = self.values
        return f


@dataclass(frozen=True)
class _ColorBlock:
    vertices: npt.NDArray[np.int64]
    neighbors: npt.NDArray[np.int64]
    owner: npt.NDArray[np.int64]
    starts: npt.NDArray[np.int64]


def _color_blocks(g: Graph, interior: VertexSet) -> List[_ColorBlock]:
    indptr, indices, _ = g.csr
    blocks = []
    for cls in color_classes(g, interior):
        counts = indptr[cls + 1] - indptr[cls]
        neighbors = np.concatenate([indices[indptr[v] : indptr[v + 1]] for v in cls.tolist()])
        owner = np.repeat(np.arange(cls.size), counts)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        blocks.append(_ColorBlock(cls, neighbors, owner, starts))
    return blocks


def _sweep(f: VertexFunction, blocks: List[_ColorBlock], p: float, steps: int) -> None:
    """One exact coordinate pass: f(v) <- argmin_t sum_{u~v} |f(u) - t|^p, in place."""
    for block in blocks:
        nb = f[block.neighbors]
        lo = np.minimum.reduceat(nb, block.starts)
        hi = np.maximum.reduceat(nb, block.starts)
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            slope = np.bincount(
                block.owner,
                weights=signed_power(mid[block.owner] - nb, p - 1.0),
                minlength=block.vertices.size,
            )
            above = slope > 0
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        f[block.vertices] = 0.5 * (lo + hi)


def _residual(g: Graph, f: VertexFunction, interior: VertexSet, p: float) -> float:
    return float(np.max(np.abs(p_laplacian(g, f, p)[interior])))


def _coordinate_descent(
    prob: DirichletProblem, cfg: SolverConfig, f: VertexFunction, sweeps_done: int = 0
) -> VertexFunction:
    g, interior = prob.graph, prob.interior
    blocks = _color_blocks(g, interior)
    residual = _residual(g, f, interior, cfg.p)
    sweeps = sweeps_done
    while residual > cfg.tolerance:
        if sweeps >= cfg.max_sweeps:
            raise MaxSweepsExceededError(
                f"No convergence after {sweeps} sweeps: residual {residual:.3e}"
                f" > tolerance {cfg.tolerance:.1e}",
                residual=residual,
                solution=f,
            )
        _sweep(f, blocks, cfg.p, cfg.bisection_steps)
        sweeps += 1
        residual = _residual(g, f, interior, cfg.p)
        if sweeps % 1000 == 0:
            logger.debug("sweep %d: residual %.3e", sweeps, residual)
    logger.debug("coordinate descent converged after %d sweeps (residual %.3e)", sweeps, residual)
    return f


def _newton(prob: DirichletProblem, cfg: SolverConfig, f: VertexFunction) -> VertexFunction:
    g, interior, p = prob.graph, prob.interior, cfg.p
    d_interior = sparse.csc_matrix(g.incidence[:, interior])
    eps2 = max(cfg.epsilon, 1e-10) ** 2
    energy = dirichlet_energy(g, f, p)
    residual = _residual(g, f, interior, p)
    for step in range(cfg.max_newton_steps):
        if residual <= cfg.tolerance:
            logger.debug("newton converged after %d steps (residual %.3e)", step, residual)
            return f
        df = g.incidence @ f
        gradient = -p * p_laplacian(g, f, p)[interior]
        weights = (df**2 + eps2) ** ((p - 2.0) / 2.0)
        hessian = p * (p - 1.0) * (d_interior.T @ sparse.diags(weights) @ d_interior)
        shift = 1e-12 * max(float(hessian.diagonal().max()), 1e-300)
        hessian = hessian + shift * sparse.identity(interior.size)
        direction = np.asarray(sparse_linalg.spsolve(sparse.csc_matrix(hessian), -gradient))
        slope = float(gradient @ direction)
        if not np.all(np.isfinite(direction)) or slope >= 0:
            break
        t = 1.0
        accepted = False
        for _ in range(40):
            trial = f.copy()
            trial[interior] += t * direction
            trial_energy = dirichlet_energy(g, trial, p)
            if trial_energy <= energy + 1e-4 * t * slope:
                accepted = True
            elif abs(trial_energy - energy) <= 1e-14 * max(1.0, energy):
                # at rounding level the energy no longer orders iterates; use the residual
                accepted = _residual(g, trial, interior, p) < residual
            if accepted:
                break
            t *= 0.5
        if not accepted:
            break
        f, energy = trial, trial_energy
        residual = _residual(g, f, interior, p)
        logger.debug("newton step %d: t=%.3g residual %.3e", step + 1, t, residual)
    if residual <= cfg.tolerance:
        return f
    logger.debug("newton stalled at residual %.3e, continuing with coordinate sweeps", residual)
    return _coordinate_descent(prob, cfg, f)


def solve_dirichlet_exact(prob: DirichletProblem) -> VertexFunction:
    """The p = 2 solution from one sparse linear solve of the graph Laplacian."""
    interior = prob.interior
    f = prob.extend()
    if interior.size == 0:
        return f
    laplacian = sparse.csr_matrix(prob.graph.incidence.T @ prob.graph.incidence)
    l_ii = sparse.csc_matrix(laplacian[interior][:, interior])
    l_ib = laplacian[interior][:, prob.boundary]
    rhs = -(l_ib @ prob.values)
    f[interior] = np.atleast_1d(sparse_linalg.spsolve(l_ii, rhs))
    return f


def solve_dirichlet(
    prob: DirichletProblem,
    cfg: SolverConfig,
    *,
    initial: VertexFunction | None = None,
) -> VertexFunction:
    """Minimise D_p over functions with the given boundary values.

    The minimiser is unique (strict convexity), p-harmonic on the interior and satisfies the
    maximum principle. A problem without interior vertices issues `NoInteriorWarning` and
    returns the boundary data.
    """
    interior = prob.interior
    if interior.size == 0:
        warnings.warn(
            "Dirichlet problem has no interior vertex; returning the boundary data",
            NoInteriorWarning,
            stacklevel=2,
        )
        return prob.extend()
    lo, hi = float(prob.values.min()), float(prob.values.max())
    if lo == hi:
        return prob.extend(lo)
    if initial is not None:
        f = np.array(initial, dtype=np.float64)
        f[prob.boundary] = prob.values
        f[interior] = np.clip(f[interior], lo, hi)
    else:
        # the p = 2 solution is an exact warm start and already obeys the maximum principle
        f = np.clip(solve_dirichlet_exact(prob), lo, hi)
    method = cfg.method
    if method == "auto":
        method = "newton" if cfg.p < 2.0 or interior.size > NEWTON_INTERIOR_SIZE else "coordinate"
    logger.debug("solving p=%g on %d interior vertices with %s", cfg.p, interior.size, method)
    if method == "newton":
        return _newton(prob, cfg, f)
    return _coordinate_descent(prob, cfg, f)
