from __future__ import annotations

import logging
from dataclasses import dataclass

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph
from nlpot.exceptions import NotHyperbolicError
from nlpot.generators._base import GeneratedGraph

logger = logging.getLogger(__name__)


def is_hyperbolic(p: int, q: int) -> bool:
    return (p - 2) * (q - 2) > 4


@dataclass
class _Spoke:
    source_pos: int  # position of the source vertex on the current boundary cycle
    local: int  # index among the spokes of that source


class _RingBuilder:
    """Grows the {p,q} disk one ring of faces at a time.

    The disk is described by its counterclockwise boundary cycle and, per vertex, the number
    of faces already built around it. A boundary vertex with f faces needs q - f - 1 new
    edges ("spokes") pointing outwards (the centre, which has no boundary edges, needs q).
    Between consecutive spokes one new p-gon closes the gap; if the gap's boundary path already
    has p - 1 vertices the two spoke ends coincide.
    """

    def __init__(self, p: int, q: int) -> None:
        self.p = p
        self.q = q
        self.labels: list[tuple[int, int]] = [(0, 0)]
        self.edges: list[tuple[int, int]] = []
        self.faces: list[tuple[int, ...]] = []
        self.face_count: list[int] = [0]
        self.ring: list[int] = [0]
        self.layer = 0

    def _spokes(self) -> list[_Spoke]:
        spokes: list[_Spoke] = []
        for pos, v in enumerate(self.ring):
            if len(self.ring) == 1:
                k = self.q
            else:
                k = self.q - self.face_count[v] - 1
            if k < 0:
                raise AssertionError(f"vertex {v} has {self.face_count[v]} > {self.q} faces")
            spokes.extend(_Spoke(pos, j) for j in range(k))
        return spokes

    def _gap_path(self, left: _Spoke, right: _Spoke) -> list[int]:
        # boundary vertices from left's source to right's source, counterclockwise
        if left.source_pos == right.source_pos and (
            right.local == left.local + 1 or len(self.ring) == 1
        ):
            return [self.ring[left.source_pos]]
        n = len(self.ring)
        steps = (right.source_pos - left.source_pos) % n
        if steps == 0:
            raise AssertionError("only one boundary vertex carries spokes")
        return [self.ring[(left.source_pos + i) % n] for i in range(steps + 1)]

    def grow(self) -> None:
        spokes = self._spokes()
        n_spokes = len(spokes)
        paths = [self._gap_path(spokes[t], spokes[(t + 1) % n_spokes]) for t in range(n_spokes)]
        fills = [self.p - len(path) - 2 for path in paths]
        if min(fills) < -1:
            raise AssertionError(f"gap with {min(fills)} new vertices in {{{self.p},{self.q}}}")
        check_vertex_budget(
            len(self.labels) + n_spokes + sum(max(m, 0) for m in fills),
            f"hyperbolic_tessellation({self.p}, {self.q}) layer {self.layer + 1}",
        )

        # spoke t and spoke t + 1 share their end when gap t needs -1 new vertices
        end_group = list(range(n_spokes))
        for t in range(n_spokes - 1):
            if fills[t] == -1:
                end_group[t + 1] = end_group[t]
        if fills[-1] == -1 and n_spokes > 1:
            last = end_group[-1]
            end_group = [end_group[0] if g == last else g for g in end_group]

        layer = self.layer + 1
        new_ring: list[int] = []

        def new_vertex() -> int:
            v = len(self.labels)
            self.labels.append((layer, len(new_ring)))
            self.face_count.append(0)
            new_ring.append(v)
            return v

        group_vertex: dict[int, int] = {}

        def spoke_end(t: int) -> int:
            group = end_group[t]
            if group not in group_vertex:
                group_vertex[group] = new_vertex()
                # every spoke of the group ends here
                for s, g in enumerate(end_group):
                    if g == group:
                        self.edges.append((self.ring[spokes[s].source_pos], group_vertex[group]))
            return group_vertex[group]

        gap_fill: list[list[int]] = []
        for t in range(n_spokes):
            a = spoke_end(t)
            if new_ring[-1] != a:
                new_ring.append(a)
            fill = [new_vertex() for _ in range(max(fills[t], 0))]
            gap_fill.append(fill)
        first_end = spoke_end(0)
        if len(new_ring) > 1 and new_ring[-1] == first_end and new_ring[0] == first_end:
            new_ring.pop()

        for t in range(n_spokes):
            a = group_vertex[end_group[t]]
            b = group_vertex[end_group[(t + 1) % n_spokes]]
            fill = gap_fill[t]
            chain = [a, *fill] + ([b] if b != a else [])
            for u, v in zip(chain, chain[1:]):
                self.edges.append((u, v))
            face = tuple(reversed(paths[t])) + tuple(chain)
            self.faces.append(face)
            for v in face:
                self.face_count[v] += 1

        self.ring = new_ring
        self.layer = layer
        logger.debug(
            "{%d,%d} layer %d: %d vertices on the boundary", self.p, self.q, layer, len(new_ring)
        )


def hyperbolic_tessellation(p: int, q: int, layers: int) -> GeneratedGraph:
    """Vertex graph of the regular {p,q} tiling of the hyperbolic plane, grown from a vertex.

    `p` is the number of sides of each face and `q` the number of faces (and edges) at each
    vertex. Labels are `(layer, index)`; index runs counterclockwise along the layer. The
    returned faces are oriented counterclockwise and `boundary` is the outermost layer.
    """
    if p < 3 or q < 3:
        raise ValueError(f"p and q must be >= 3, got {{{p},{q}}}")
    if not is_hyperbolic(p, q):
        raise NotHyperbolicError(
            f"{{{p},{q}}} is not hyperbolic: (p-2)(q-2) = {(p - 2) * (q - 2)} <= 4"
        )
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    builder = _RingBuilder(p, q)
    for _ in range(layers):
        builder.grow()
    return GeneratedGraph(
        graph=Graph(len(builder.labels), builder.edges, builder.labels),
        family="tessellation",
        params={"p": p, "q": q, "layers": layers},
        center=0,
        faces=tuple(builder.faces),
        boundary=tuple(builder.ring),
    )
