from nlpot._graph import (
    EdgeMetric,
    Graph,
    Path,
    VertexFunction,
    VertexSet,
    as_edge_metric,
    as_vertex_function,
    ball,
    bilipschitz_constant,
    build_graph,
    gradient_abs,
    hop_distances,
    induced_subgraph,
    metric_distance,
    metric_distances,
    natural_metric,
    path_length,
    shortest_path_between,
    sphere,
)
from nlpot._io import read_graph, read_vertex_function, write_graph, write_vertex_function
from nlpot.generators import (
    FamilySpec,
    cartesian_product,
    hyperbolic_tessellation,
    lattice_box,
    random_connected_graph,
    regular_tree,
    triangulated_disk,
    z_shift,
)

__all__ = (
    "EdgeMetric",
    "FamilySpec",
    "Graph",
    "Path",
    "VertexFunction",
    "VertexSet",
    "as_edge_metric",
    "as_vertex_function",
    "ball",
    "bilipschitz_constant",
    "build_graph",
    "cartesian_product",
    "gradient_abs",
    "hop_distances",
    "hyperbolic_tessellation",
    "induced_subgraph",
    "lattice_box",
    "metric_distance",
    "metric_distances",
    "natural_metric",
    "path_length",
    "random_connected_graph",
    "read_graph",
    "read_vertex_function",
    "regular_tree",
    "shortest_path_between",
    "sphere",
    "triangulated_disk",
    "write_graph",
    "write_vertex_function",
    "z_shift",
)
