from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph, VertexSet
from nlpot._io import read_graph_lines, write_graph
from nlpot.exceptions import FormatError, GraphError, NotTriangulationError
from nlpot.generators import GeneratedGraph

Face = Tuple[int, int, int]


def _edge_key(u: int, v: int) -> FrozenSet[int]:
    return frozenset((u, v))


@dataclass(frozen=True)
class Triangulation:
    """A triangulated closed disk: a planar graph, its outer cycle and its triangles.

    Faces are oriented so that each one lists its vertices counterclockwise and `boundary`
    runs counterclockwise with the disk on its left. Build instances with `triangulation`
    (which recovers and orients faces) or `from_generated`; direct construction validates
    only.
    """

    graph: Graph
    boundary: Tuple[int, ...]
    faces: Tuple[Face, ...]

    def __post_init__(self) -> None:
        _validate(self.graph, self.boundary, self.faces)

    @cached_property
    def interior(self) -> VertexSet:
        on_boundary = np.zeros(self.graph.vertex_count, dtype=bool)
        on_boundary[list(self.boundary)] = True
        return np.flatnonzero(~on_boundary).astype(np.int64)

    @cached_property
    def corners(self) -> npt.NDArray[np.int64]:
        """One row (apex, next, previous) per face corner, counterclockwise around the apex."""
        f = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        return np.concatenate([f, f[:, [1, 2, 0]], f[:, [2, 0, 1]]])

    def flower(self, v: int) -> Tuple[int, ...]:
        """Neighbours of `v` in counterclockwise order; closed cycle for interior vertices.

        For a boundary vertex the sequence starts at its successor on the boundary and ends
        at its predecessor.
        """
        succ = {int(b): int(c) for a, b, c in self.corners.tolist() if a == v}
        if v in self.boundary:
            i = self.boundary.index(v)
            start = self.boundary[(i + 1) % len(self.boundary)]
        else:
            start = min(succ)
        petals = [start]
        while petals[-1] in succ and len(petals) <= len(succ):
            nxt = succ[petals[-1]]
            if nxt == start:
                break
            petals.append(nxt)
        return tuple(petals)


def _check_boundary(graph: Graph, boundary: Sequence[int]) -> None:
    n = graph.vertex_count
    if len(boundary) < 3 or len(set(boundary)) != len(boundary):
        raise NotTriangulationError("The boundary must be a cycle of at least 3 distinct vertices")
    for u, v in zip(boundary, (*boundary[1:], boundary[0])):
        if not (0 <= u < n and 0 <= v < n) or not graph.has_edge(u, v):
            raise NotTriangulationError(f"Boundary vertices {u} and {v} are not adjacent")


def _check_faces(graph: Graph, faces: Sequence[Sequence[int]]) -> None:
    n = graph.vertex_count
    for face in faces:
        if len(face) != 3 or len(set(face)) != 3:
            raise NotTriangulationError(f"Face {tuple(face)} is not a triangle")
        a, b, c = face
        for u, v in ((a, b), (b, c), (c, a)):
            if not (0 <= u < n and 0 <= v < n) or not graph.has_edge(u, v):
                raise NotTriangulationError(f"Face {tuple(face)} uses the non-edge ({u}, {v})")


def _validate(graph: Graph, boundary: Sequence[int], faces: Sequence[Face]) -> None:
    n = graph.vertex_count
    _check_boundary(graph, boundary)
    _check_faces(graph, faces)
    seen_faces = set()
    directed: Dict[Tuple[int, int], int] = {}
    for idx, face in enumerate(faces):
        a, b, c = face
        for u, v in ((a, b), (b, c), (c, a)):
            if (u, v) in directed:
                raise NotTriangulationError(
                    f"Faces {faces[directed[(u, v)]]} and {tuple(face)} are not consistently"
                    " oriented"
                )
            directed[(u, v)] = idx
        key = frozenset(face)
        if key in seen_faces:
            raise NotTriangulationError(f"Face {tuple(face)} is listed twice")
        seen_faces.add(key)
    boundary_edges = {_edge_key(u, v) for u, v in zip(boundary, (*boundary[1:], boundary[0]))}
    for u, v in graph.edges.tolist():
        count = ((u, v) in directed) + ((v, u) in directed)
        expected = 1 if _edge_key(u, v) in boundary_edges else 2
        if count != expected:
            raise NotTriangulationError(
                f"Edge ({u}, {v}) lies in {count} faces, expected {expected}"
            )
    for u, v in zip(boundary, (*boundary[1:], boundary[0])):
        if (u, v) not in directed:
            raise NotTriangulationError("The boundary must run with the faces on its left")
    if n - graph.edge_count + len(faces) + 1 != 2:
        raise NotTriangulationError(
            f"Euler relation fails: V - E + F = {n - graph.edge_count + len(faces) + 1}"
        )


def _triangles(graph: Graph) -> List[Face]:
    adjacency = [set(nbrs) for nbrs in graph.adjacency_lists()]
    found = []
    for u, v in graph.edges.tolist():
        for w in sorted(adjacency[u] & adjacency[v]):
            if w > v:
                found.append((u, v, w))
    return found


def _orient(boundary: Sequence[int], faces: Sequence[Sequence[int]]) -> List[Face]:
    """Orient faces consistently, starting from the face on the first boundary edge."""
    by_edge: Dict[FrozenSet[int], List[int]] = {}
    for idx, face in enumerate(faces):
        a, b, c = (int(x) for x in face)
        for u, v in ((a, b), (b, c), (c, a)):
            by_edge.setdefault(_edge_key(u, v), []).append(idx)
    b0, b1 = boundary[0], boundary[1]
    start = by_edge.get(_edge_key(b0, b1), [])
    if len(start) != 1:
        raise NotTriangulationError(f"Boundary edge ({b0}, {b1}) must lie in exactly one face")
    oriented: List[Optional[Face]] = [None] * len(faces)
    first = start[0]
    third = next(int(x) for x in faces[first] if x not in (b0, b1))
    oriented[first] = (b0, b1, third)
    queue = deque([first])
    while queue:
        idx = queue.popleft()
        a, b, c = oriented[idx]  # type: ignore[misc]
        for u, v in ((a, b), (b, c), (c, a)):
            for other in by_edge[_edge_key(u, v)]:
                if oriented[other] is not None:
                    continue
                w = next(int(x) for x in faces[other] if x not in (u, v))
                # the neighbour traverses the shared edge the other way
                oriented[other] = (v, u, w)
                queue.append(other)
    if any(face is None for face in oriented):
        raise NotTriangulationError("Faces do not form a connected disk")
    return [face for face in oriented if face is not None]


def triangulation(
    graph: Graph,
    boundary: Iterable[int],
    faces: Optional[Iterable[Sequence[int]]] = None,
) -> Triangulation:
    """Validate a triangulated disk, recovering missing faces and orienting them.

    Without `faces` every triangle of the graph except the boundary itself is taken as a
    face, which is right whenever the graph has no separating triangles.
    """
    cycle = tuple(int(v) for v in boundary)
    _check_boundary(graph, cycle)
    if faces is None:
        outer = frozenset(cycle) if len(cycle) == 3 else None
        face_list = [f for f in _triangles(graph) if frozenset(f) != outer]
    else:
        face_list = [tuple(int(x) for x in f) for f in faces]
        _check_faces(graph, face_list)
    return Triangulation(graph, cycle, tuple(_orient(cycle, face_list)))


def from_generated(gen: GeneratedGraph) -> Triangulation:
    """Triangulation of a planar generator output (`triangulated_disk` or a {3,q} tessellation)."""
    if gen.faces is None or gen.boundary is None:
        raise NotTriangulationError(f"{gen.family} graphs carry no faces")
    return triangulation(gen.graph, gen.boundary, gen.faces)


def write_triangulation(out: TextIO, t: Triangulation, *, comments: Sequence[str] = ()) -> None:
    write_graph(out, t.graph, comments=comments)
    out.write("boundary: " + " ".join(str(v) for v in t.boundary) + "\n")
    for face in t.faces:
        out.write("face: " + " ".join(str(v) for v in face) + "\n")


def read_triangulation(source: TextIO) -> Triangulation:
    """Graph text format plus one `boundary: v0 v1 ...` line and optional `face: a b c` lines."""
    try:
        graph, _, extra = read_graph_lines(source)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc
    boundary: Optional[List[int]] = None
    faces: List[List[int]] = []
    for lineno, line in extra:
        key, _, rest = line.partition(":")
        try:
            values = [int(x) for x in rest.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: expected vertex ids, got {line!r}") from None
        if key == "boundary":
            if boundary is not None:
                raise FormatError(f"line {lineno}: second boundary line")
            boundary = values
        elif key == "face":
            if len(values) != 3:
                raise FormatError(f"line {lineno}: a face needs 3 vertices, got {len(values)}")
            faces.append(values)
        else:
            raise FormatError(f"line {lineno}: unexpected {line!r}")
    if boundary is None:
        raise FormatError("missing 'boundary:' line")
    return triangulation(graph, boundary, faces or None)
