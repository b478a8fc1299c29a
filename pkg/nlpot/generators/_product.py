from __future__ import annotations

from typing import Union

import numpy as np

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph, VertexFunction, as_vertex_function
from nlpot.exceptions import NotAProductError
from nlpot.generators._base import GeneratedGraph

GraphLike = Union[Graph, GeneratedGraph]


def _unwrap(g: GraphLike) -> tuple[Graph, GeneratedGraph | None]:
    if isinstance(g, GeneratedGraph):
        return g.graph, g
    return g, None


def cartesian_product(g: GraphLike, h: GraphLike) -> GeneratedGraph:
    """Cartesian product: (a, x) ~ (b, y) iff (a = b and x ~ y) or (a ~ b and x = y).

    Vertex (a, x) gets id `a * |V(h)| + x` and label `(label_g(a), label_h(x))`.
    """
    g_graph, g_gen = _unwrap(g)
    h_graph, h_gen = _unwrap(h)
    n_g, n_h = g_graph.vertex_count, h_graph.vertex_count
    check_vertex_budget(n_g * n_h, "cartesian_product")

    base_g = np.arange(n_g)[:, None] * n_h
    along_h = (base_g[:, :, None] + h_graph.edges[None, :, :]).reshape(-1, 2)
    along_g = (g_graph.edges[:, None, :] * n_h + np.arange(n_h)[None, :, None]).reshape(
        -1, 2
    )
    edges = np.concatenate([along_h, along_g])

    g_labels = g_graph.labels if g_graph.labels is not None else tuple(range(n_g))
    h_labels = h_graph.labels if h_graph.labels is not None else tuple(range(n_h))
    labels = [(a, x) for a in g_labels for x in h_labels]

    center = 0
    if g_gen is not None and h_gen is not None:
        center = g_gen.center * n_h + h_gen.center
    factors = tuple(f for f in (g_gen, h_gen) if f is not None)
    return GeneratedGraph(
        graph=Graph(n_g * n_h, edges, labels),
        family="product",
        params={"factors": (n_g, n_h)},
        center=center,
        factors=factors if len(factors) == 2 else (),
    )


def z_shift(pg: GeneratedGraph, f: VertexFunction) -> VertexFunction:
    """Pull `f` back along the translation by +1 of the Z-segment factor.

    `(f o tau)(a, z) = f(a, z + 1)`; the top column z = L has nowhere to go and keeps its
    own values, so only columns z < L are exact.
    """
    if pg.family != "product" or len(pg.factors) != 2:
        raise NotAProductError("z_shift needs a product built from two generated factors")
    segment = pg.factors[1]
    if segment.family != "lattice" or segment.params.get("d") != 1:
        raise NotAProductError("the second factor of the product must be a Z-segment")
    values = as_vertex_function(pg.graph, f)
    n_h = segment.graph.vertex_count
    columns = values.reshape(-1, n_h)
    shifted = np.minimum(np.arange(n_h) + 1, n_h - 1)
    return columns[:, shifted].reshape(-1)
