from __future__ import annotations

import numpy as np

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph
from nlpot.generators._base import GeneratedGraph


def lattice_box(d: int, R: int) -> GeneratedGraph:
    """The box {-R..R}^d of Z^d with nearest-neighbour edges.

    Vertices are numbered in row-major order of their coordinates; the centre is the origin.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if R < 1:
        raise ValueError(f"radius must be >= 1, got {R}")
    side = 2 * R + 1
    check_vertex_budget(side**d, f"lattice_box(d={d}, R={R})")
    shape = (side,) * d
    n = side**d
    coords = np.stack(np.unravel_index(np.arange(n), shape), axis=1) - R
    edge_blocks = []
    for axis in range(d):
        stride = side ** (d - 1 - axis)
        lower = np.flatnonzero(coords[:, axis] < R)
        edge_blocks.append(np.stack([lower, lower + stride], axis=1))
    edges = np.concatenate(edge_blocks)
    labels = [tuple(row) for row in coords.tolist()]
    center = int(np.ravel_multi_index((R,) * d, shape))
    return GeneratedGraph(
        graph=Graph(n, edges, labels),
        family="lattice",
        params={"d": d, "R": R},
        center=center,
    )
