"""Circle packings of triangulated disks with prescribed boundary radii.

Interior radii are adjusted until the angle sum at every interior vertex is 2 pi. The angle
at v in the triangle of mutually tangent circles v, u, w is the law of cosines angle of the
triangle with sides r_v + r_u, r_v + r_w, r_u + r_w, written in its half-angle form

    2 asin(sqrt(r_u r_w / ((r_v + r_u) (r_v + r_w))))

which stays accurate for thin triangles. Each update solves for one radius exactly by
bisection in log r, colour class by colour class, and the centres are then laid out face by
face.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from nlpot._utils.coloring import color_classes
from nlpot.circlepack._triangulation import Triangulation
from nlpot.exceptions import ConfigError, NoConvergenceError
from nlpot.packing import Packing

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CirclePackConfig:
    """Convergence is declared when every interior angle sum is within `tolerance` of 2 pi."""

    tolerance: float = 1e-8
    max_sweeps: int = 100_000
    bisection_steps: int = 60

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_sweeps < 1:
            raise ConfigError(f"max_sweeps must be >= 1, got {self.max_sweeps}")
        if self.bisection_steps < 1:
            raise ConfigError(f"bisection_steps must be >= 1, got {self.bisection_steps}")


def _corner_angles(
    r_apex: npt.NDArray[np.float64],
    r_next: npt.NDArray[np.float64],
    r_prev: npt.NDArray[np.float64],
) -> npt.NDArray[np.float64]:
    ratio = r_next * r_prev / ((r_apex + r_next) * (r_apex + r_prev))
    return 2.0 * np.arcsin(np.sqrt(np.clip(ratio, 0.0, 1.0)))


def angle_sum(r_v: float, petals: Sequence[float]) -> float:
    """Angle sum at a circle of radius `r_v` surrounded by the closed chain of `petals`."""
    r = np.asarray(petals, dtype=np.float64)
    if r.size < 3:
        raise ValueError(f"A closed flower needs at least 3 petals, got {r.size}")
    return float(np.sum(_corner_angles(np.full(r.size, float(r_v)), r, np.roll(r, -1))))


def angle_sums(t: Triangulation, radii: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Angle sum at every vertex (partial sums at boundary vertices)."""
    r = np.asarray(radii, dtype=np.float64)
    c = t.corners
    theta = _corner_angles(r[c[:, 0]], r[c[:, 1]], r[c[:, 2]])
    return np.bincount(c[:, 0], weights=theta, minlength=t.graph.vertex_count)


@dataclass(frozen=True)
class _CornerBlock:
    vertices: npt.NDArray[np.int64]
    owner: npt.NDArray[np.int64]
    next: npt.NDArray[np.int64]
    prev: npt.NDArray[np.int64]
    # 1 / sin(pi / k) - 1: radius ratio of a vertex of degree k among equal petals
    spread: npt.NDArray[np.float64]


def _corner_blocks(t: Triangulation) -> List[_CornerBlock]:
    corners = t.corners
    blocks = []
    position = np.full(t.graph.vertex_count, -1, dtype=np.int64)
    for cls in color_classes(t.graph, t.interior):
        position[cls] = np.arange(cls.size)
        rows = corners[position[corners[:, 0]] >= 0]
        owner = position[rows[:, 0]]
        degree = np.bincount(owner, minlength=cls.size)
        blocks.append(
            _CornerBlock(
                vertices=cls,
                owner=owner,
                next=rows[:, 1],
                prev=rows[:, 2],
                spread=1.0 / np.sin(np.pi / degree) - 1.0,
            )
        )
        position[cls] = -1
    return blocks


def _sweep(r: npt.NDArray[np.float64], blocks: List[_CornerBlock], steps: int) -> None:
    """Solve every interior radius for angle sum 2 pi given its petals, in place."""
    for block in blocks:
        size = block.vertices.size
        petals = r[block.next]
        lo = np.full(size, np.inf)
        hi = np.full(size, -np.inf)
        np.minimum.at(lo, block.owner, petals)
        np.maximum.at(hi, block.owner, petals)
        # the root lies between the equal-petal solutions for the smallest and largest petal
        lo = np.log(lo * block.spread)
        hi = np.log(hi * block.spread)
        r_next, r_prev = r[block.next], r[block.prev]
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            theta = np.bincount(
                block.owner,
                weights=_corner_angles(np.exp(mid)[block.owner], r_next, r_prev),
                minlength=size,
            )
            too_small = theta > TWO_PI
            lo = np.where(too_small, mid, lo)
            hi = np.where(too_small, hi, mid)
        r[block.vertices] = np.exp(0.5 * (lo + hi))


def _residual(t: Triangulation, r: npt.NDArray[np.float64]) -> float:
    if t.interior.size == 0:
        return 0.0
    return float(np.max(np.abs(angle_sums(t, r)[t.interior] - TWO_PI)))


def layout(t: Triangulation, radii: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Centres of tangent circles, placed face by face from the first face at vertex 0.

    Vertex 0 sits at the origin and its counterclockwise successor in that face on the
    positive x axis.
    """
    r = np.asarray(radii, dtype=np.float64)
    faces = t.faces
    by_edge: Dict[FrozenSet[int], List[int]] = {}
    for idx, (a, b, c) in enumerate(faces):
        for u, v in ((a, b), (b, c), (c, a)):
            by_edge.setdefault(frozenset((u, v)), []).append(idx)
    first = next(i for i, f in enumerate(faces) if 0 in f)
    a, b, _ = _rotate_to(faces[first], 0)
    z = np.full(t.graph.vertex_count, np.nan, dtype=np.complex128)
    z[a] = 0.0
    z[b] = r[a] + r[b]
    placed = np.zeros(t.graph.vertex_count, dtype=bool)
    placed[[a, b]] = True
    visited = {first}
    queue = deque([first])
    while queue:
        face = faces[queue.popleft()]
        missing = [v for v in face if not placed[v]]
        if missing:
            x, y, w = _rotate_to(face, face[(face.index(missing[0]) + 1) % 3])
            angle = _corner_angles(r[[x]], r[[y]], r[[w]])[0]
            z[w] = z[x] + (r[x] + r[w]) * np.exp(1j * (np.angle(z[y] - z[x]) + angle))
            placed[w] = True
        for u, v in zip(face, (*face[1:], face[0])):
            for other in by_edge[frozenset((u, v))]:
                if other not in visited:
                    visited.add(other)
                    queue.append(other)
    return np.stack([z.real, z.imag], axis=1)


def _rotate_to(face: Sequence[int], v: int) -> tuple[int, int, int]:
    i = list(face).index(v)
    return face[i], face[(i + 1) % 3], face[(i + 2) % 3]


def tangency_residual(
    t: Triangulation, centers: npt.ArrayLike, radii: npt.ArrayLike
) -> float:
    """max over edges of | |z_u - z_v| - (r_u + r_v) | / (r_u + r_v)."""
    z = np.asarray(centers, dtype=np.float64)
    r = np.asarray(radii, dtype=np.float64)
    u, v = t.graph.edges[:, 0], t.graph.edges[:, 1]
    gap = np.linalg.norm(z[u] - z[v], axis=1) - (r[u] + r[v])
    return float(np.max(np.abs(gap) / (r[u] + r[v])))


@dataclass(frozen=True)
class DiskPacking:
    """A circle packing of `triangulation`; ball i of `packing` is the circle of vertex i."""

    triangulation: Triangulation
    radii: npt.NDArray[np.float64]
    packing: Packing
    angle_residual: float
    tangency_residual: float
    sweeps: int
    vertices: npt.NDArray[np.int64]

    @property
    def centers(self) -> npt.NDArray[np.float64]:
        return self.packing.centers


def _finish(
    t: Triangulation, r: npt.NDArray[np.float64], residual: float, sweeps: int
) -> DiskPacking:
    centers = layout(t, r)
    return DiskPacking(
        triangulation=t,
        radii=r,
        packing=Packing(centers, r),
        angle_residual=residual,
        tangency_residual=tangency_residual(t, centers, r),
        sweeps=sweeps,
        vertices=np.arange(t.graph.vertex_count, dtype=np.int64),
    )


def pack_disk(
    t: Triangulation,
    boundary_radii: npt.ArrayLike,
    cfg: Optional[CirclePackConfig] = None,
) -> DiskPacking:
    """Circle pack `t` with the given radii on `t.boundary` (in boundary order)."""
    cfg = cfg or CirclePackConfig()
    fixed = np.asarray(boundary_radii, dtype=np.float64).reshape(-1)
    if fixed.shape != (len(t.boundary),):
        raise ValueError(f"Expected {len(t.boundary)} boundary radii, got {fixed.size}")
    if not (np.all(fixed > 0) and np.all(np.isfinite(fixed))):
        raise ValueError("Boundary radii must be positive and finite")
    r = np.full(t.graph.vertex_count, float(np.mean(fixed)))
    r[list(t.boundary)] = fixed

    blocks = _corner_blocks(t)
    residual = _residual(t, r)
    sweeps = 0
    while residual > cfg.tolerance:
        if sweeps >= cfg.max_sweeps:
            raise NoConvergenceError(
                f"No convergence after {sweeps} sweeps: angle residual {residual:.3e}"
                f" > tolerance {cfg.tolerance:.1e}",
                residual=residual,
                result=_finish(t, r, residual, sweeps),
            )
        _sweep(r, blocks, cfg.bisection_steps)
        sweeps += 1
        residual = _residual(t, r)
        if sweeps % 1000 == 0:
            logger.debug("sweep %d: angle residual %.3e", sweeps, residual)
    logger.debug("circle packing converged after %d sweeps (residual %.3e)", sweeps, residual)
    return _finish(t, r, residual, sweeps)


def geometric_boundary_radii(
    t: Triangulation, anchor: int, ratio: float
) -> npt.NDArray[np.float64]:
    """Boundary radii ratio^(K - k), k the distance along the boundary cycle to `anchor`.

    With ratio < 1 the circles shrink towards the anchor, whose radius is ratio^K.
    """
    if anchor not in t.boundary:
        raise ValueError(f"Vertex {anchor} is not on the boundary")
    if not 0 < ratio <= 1:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    n = len(t.boundary)
    offset = (np.arange(n) - t.boundary.index(anchor)) % n
    k = np.minimum(offset, n - offset)
    return np.asarray(float(ratio)) ** (k.max() - k)
