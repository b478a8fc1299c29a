from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph, VertexSet
from nlpot.exceptions import TooLargeError, ZeroGradientError

logger = logging.getLogger(__name__)

MAX_EXACT_VERTICES = 22
_CHUNK = 1 << 15


def edge_boundary_size(g: Graph, S: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in S."""
    member = np.zeros(g.vertex_count, dtype=bool)
    member[np.fromiter((int(v) for v in S), dtype=np.int64)] = True
    return int(np.count_nonzero(member[g.edges[:, 0]] != member[g.edges[:, 1]]))


def cheeger_constant_exact(g: Graph) -> float:
    """min |boundary(S)| / |S| over nonempty S with |S| <= |V| / 2, by enumerating subsets."""
    n = g.vertex_count
    if n > MAX_EXACT_VERTICES:
        raise TooLargeError(
            f"Exact Cheeger enumeration is limited to {MAX_EXACT_VERTICES} vertices, got {n}"
        )
    if n < 2:
        raise ValueError("The Cheeger constant needs at least two vertices")
    u = g.edges[:, 0].astype(np.uint32)
    v = g.edges[:, 1].astype(np.uint32)
    shifts = np.arange(n, dtype=np.uint32)
    best = np.inf
    for start in range(1, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.uint32)
        sizes = ((masks[:, None] >> shifts) & 1).sum(axis=1)
        keep = sizes <= n // 2
        if not keep.any():
            continue
        masks, sizes = masks[keep], sizes[keep]
        cut = (((masks[:, None] >> u) ^ (masks[:, None] >> v)) & 1).sum(axis=1)
        best = min(best, float(np.min(cut / sizes)))
    logger.debug("exact Cheeger constant on %d vertices: %g", n, best)
    return best


@dataclass(frozen=True)
class CheegerMeasurement:
    """Measured constants of the inequalities sum |f| <= c sum |df| and its p-th power version.

    `applicable` tells whether the support is at most half the vertices, which is when the
    co-area argument gives c1 <= 1/h.
    """

    c1: float
    cp: float
    bound: float
    bound_ok: bool
    applicable: bool
    support_size: int


def cheeger_functional_check(
    g: Graph,
    f: npt.ArrayLike,
    h: float,
    p: float,
    boundary: Iterable[int] | None = None,
) -> CheegerMeasurement:
    values = np.asarray(f, dtype=np.float64)
    if values.shape != (g.vertex_count,):
        raise ValueError(f"Expected {g.vertex_count} vertex values, got shape {values.shape}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if boundary is not None:
        outside = np.fromiter((int(v) for v in boundary), dtype=np.int64)
        if np.any(values[outside] != 0):
            raise ValueError("f must vanish on the boundary")
    support = int(np.count_nonzero(values))
    df = np.abs(g.incidence @ values)
    mass, variation = float(np.sum(np.abs(values))), float(np.sum(df))
    if support == 0:
        c1 = cp = 0.0
    elif variation == 0:
        raise ZeroGradientError("f is a nonzero constant: its gradient vanishes everywhere")
    else:
        c1 = mass / variation
        cp = float(np.sum(np.abs(values) ** p) / np.sum(df**p))
    bound = 1.0 / h
    return CheegerMeasurement(
        c1=c1,
        cp=cp,
        bound=bound,
        bound_ok=c1 <= bound + 1e-12,
        applicable=support <= g.vertex_count / 2,
        support_size=support,
    )


def power_transform_samples(
    g: Graph,
    support: VertexSet,
    h: float,
    p: float,
    samples: int,
    rng: np.random.Generator,
) -> List[CheegerMeasurement]:
    """Apply the functional check to f = u^p for random nonnegative u supported on `support`."""
    out = []
    for _ in range(samples):
        u = np.zeros(g.vertex_count)
        u[support] = rng.uniform(size=len(support))
        out.append(cheeger_functional_check(g, u**p, h, p))
    return out
