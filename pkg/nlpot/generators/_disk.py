from __future__ import annotations

import itertools

import numpy as np
import numpy.typing as npt

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph
from nlpot.generators._base import GeneratedGraph

# axial directions of the three edge classes of the triangular lattice
_EDGE_STEPS = ((1, 0), (0, 1), (-1, 1))


def hex_positions(labels: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Planar positions of axial coordinates (q, r): x = q + r/2, y = r*sqrt(3)/2."""
    qr = np.asarray(labels, dtype=np.float64).reshape(-1, 2)
    return np.stack([qr[:, 0] + qr[:, 1] / 2, qr[:, 1] * np.sqrt(3) / 2], axis=1)


def triangulated_disk(layers: int) -> GeneratedGraph:
    """Hexagonal patch of the triangular lattice: all vertices within hex distance `layers`.

    Labels are axial coordinates (q, r). Interior vertices have degree 6; faces are the unit
    triangles, oriented counterclockwise, and `boundary` lists the outer ring counterclockwise.
    """
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    n = 1 + 3 * layers * (layers + 1)
    check_vertex_budget(n, f"triangulated_disk({layers})")

    coords = [
        (q, r)
        for r in range(-layers, layers + 1)
        for q in range(-layers, layers + 1)
        if max(abs(q), abs(r), abs(q + r)) <= layers
    ]
    index = {c: i for i, c in enumerate(coords)}

    edges = [
        (i, index[(q + dq, r + dr)])
        for i, (q, r) in enumerate(coords)
        for dq, dr in _EDGE_STEPS
        if (q + dq, r + dr) in index
    ]

    # anchors range over the bounding box: a down triangle need not contain its anchor
    faces: list[tuple[int, int, int]] = []
    for q, r in itertools.product(range(-layers - 1, layers + 1), repeat=2):
        up = ((q, r), (q + 1, r), (q, r + 1))
        down = ((q + 1, r), (q + 1, r + 1), (q, r + 1))
        for tri in (up, down):
            if all(c in index for c in tri):
                faces.append((index[tri[0]], index[tri[1]], index[tri[2]]))

    ring = np.array(
        [i for i, (q, r) in enumerate(coords) if max(abs(q), abs(r), abs(q + r)) == layers]
    )
    xy = hex_positions([coords[i] for i in ring])
    ring = ring[np.argsort(np.arctan2(xy[:, 1], xy[:, 0]), kind="stable")]

    return GeneratedGraph(
        graph=Graph(n, edges, coords),
        family="disk",
        params={"layers": layers},
        center=index[(0, 0)],
        faces=tuple(faces),
        boundary=tuple(int(v) for v in ring),
    )
