from collections import Counter

import numpy as np
import pytest

from nlpot import build_graph
from nlpot.exceptions import ConfigError, NotAProductError, NotHyperbolicError, SizeLimitError
from nlpot.generators import (
    FamilySpec,
    cartesian_product,
    hex_positions,
    hyperbolic_tessellation,
    lattice_box,
    random_connected_graph,
    regular_tree,
    tree_layer_sizes,
    triangulated_disk,
    z_shift,
)


def _signed_area(xy: np.ndarray) -> float:
    x, y = xy[:, 0], xy[:, 1]
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) / 2)


@pytest.mark.parametrize(
    "d,R,vertices,edges",
    [(1, 1, 3, 2), (2, 1, 9, 12), (3, 1, 27, 54), (2, 3, 49, 84)],
)
def test_lattice_box_counts(d, R, vertices, edges):
    box = lattice_box(d, R)
    assert box.graph.vertex_count == vertices
    assert box.graph.edge_count == edges
    assert box.labels[box.center] == (0,) * d


def test_lattice_box_degrees():
    box = lattice_box(3, 2)
    coords = np.array(box.labels)
    interior = np.all(np.abs(coords) < 2, axis=1)
    assert box.graph.degree(box.center) == 6
    assert np.all(box.graph.degrees[interior] == 6)
    assert np.all(box.graph.degrees[~interior] < 6)


def test_vertex_budget(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("NLPOT_VERTEX_BUDGET", "100")
    with pytest.raises(SizeLimitError) as exc_info:
        lattice_box(2, 10)
    assert exc_info.value.requested == 441
    assert exc_info.value.budget == 100


def test_vertex_budget_must_be_an_integer(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("NLPOT_VERTEX_BUDGET", "lots")
    with pytest.raises(ConfigError, match="must be an integer"):
        lattice_box(1, 1)


@pytest.mark.parametrize(
    "branching,depth,kind,vertices",
    [(2, 1, "rooted", 3), (2, 3, "rooted", 15), (3, 2, "regular", 10), (3, 3, "rooted", 40)],
)
def test_tree_counts(branching, depth, kind, vertices):
    tree = regular_tree(branching, depth, kind=kind)
    assert tree.graph.vertex_count == vertices
    assert sum(tree_layer_sizes(branching, depth, kind)) == vertices
    assert tree.graph.degree(tree.center) == branching
    assert len(tree.marked) == tree_layer_sizes(branching, depth, kind)[-1]
    assert all(tree.graph.degree(leaf) == 1 for leaf in tree.marked)


def test_tree_degree_bounds():
    rooted = regular_tree(2, 4)
    assert set(rooted.graph.degrees.tolist()) == {1, 2, 3}
    regular = regular_tree(3, 4, kind="regular")
    assert set(regular.graph.degrees.tolist()) == {1, 3}


def test_product_of_two_edges_is_a_square():
    k2 = build_graph([(0, 1)])
    square = cartesian_product(k2, k2)
    assert square.graph.vertex_count == 4
    assert square.graph.edge_count == 4
    assert square.graph.degrees.tolist() == [2, 2, 2, 2]


def test_product_grid():
    grid = cartesian_product(lattice_box(1, 1), lattice_box(1, 1))
    assert grid.graph.vertex_count == 9
    assert grid.graph.edge_count == 12
    assert grid.labels[grid.center] == ((0,), (0,))


def test_product_counts_and_degrees():
    tree = regular_tree(3, 2, kind="regular")
    segment = lattice_box(1, 3)
    product = cartesian_product(tree, segment)
    n_g, n_h = tree.graph.vertex_count, segment.graph.vertex_count
    assert product.graph.vertex_count == n_g * n_h
    assert product.graph.edge_count == n_g * segment.graph.edge_count + n_h * tree.graph.edge_count
    assert product.graph.degree(product.center) == 3 + 2
    assert np.all(product.graph.degrees <= 3 + 2)


@pytest.fixture
def tree_times_segment():
    return cartesian_product(regular_tree(3, 2, kind="regular"), lattice_box(1, 3))


def test_z_shift_constant(tree_times_segment):
    f = np.full(tree_times_segment.graph.vertex_count, 2.5)
    assert np.array_equal(z_shift(tree_times_segment, f), f)


def test_z_shift_coordinate(tree_times_segment):
    z = np.array([label[1][0] for label in tree_times_segment.labels], dtype=float)
    shifted = z_shift(tree_times_segment, z)
    interior = z < 3
    assert np.array_equal(shifted[interior], z[interior] + 1)
    # the top column has nowhere to go and keeps its values
    assert np.array_equal(shifted[~interior], z[~interior])


def test_z_shift_tree_only_function(tree_times_segment):
    depth = np.array([len(label[0]) for label in tree_times_segment.labels], dtype=float)
    assert np.array_equal(z_shift(tree_times_segment, depth), depth)


def test_z_shift_preserves_adjacency(tree_times_segment):
    g = tree_times_segment.graph
    ids = np.arange(g.vertex_count, dtype=float)
    image = z_shift(tree_times_segment, ids).astype(int)
    z = np.array([label[1][0] for label in tree_times_segment.labels])
    for u, v in g.edges.tolist():
        if z[u] < 3 and z[v] < 3:
            assert g.has_edge(int(image[u]), int(image[v]))


def test_z_shift_needs_a_product():
    box = lattice_box(2, 1)
    with pytest.raises(NotAProductError):
        z_shift(box, np.zeros(box.graph.vertex_count))
    grid = cartesian_product(lattice_box(1, 1), lattice_box(2, 1))
    with pytest.raises(NotAProductError, match="Z-segment"):
        z_shift(grid, np.zeros(grid.graph.vertex_count))


def _ring_sizes_by_face_counts(p: int, q: int, layers: int) -> list[int]:
    """Layer sizes from the cyclic sequence of per-vertex face counts alone."""
    sizes = [1]
    counts: list[int] = []
    for _ in range(layers):
        spokes = [q] if not counts else [q - f - 1 for f in counts]
        n = len(spokes)
        owner = [(i, a) for i, k in enumerate(spokes) for a in range(k)]
        fills = []
        for t, (i, a) in enumerate(owner):
            j, b = owner[(t + 1) % len(owner)]
            if n == 1 or (i == j and b == a + 1):
                path = 1
            else:
                path = (j - i) % n + 1
            fills.append(p - path - 2)
        new_counts: list[int] = []
        for t, fill in enumerate(fills):
            if t > 0 and fills[t - 1] == -1:
                new_counts[-1] += 1
            else:
                new_counts.append(2)
            new_counts.extend([1] * max(fill, 0))
        if fills[-1] == -1:
            new_counts[0] += new_counts.pop() - 1
        counts = new_counts
        sizes.append(len(counts))
    return sizes


@pytest.mark.parametrize(
    "p,q,layers,expected",
    [(4, 5, 2, [1, 10, 40]), (3, 7, 3, [1, 7, 21, 56]), (5, 4, 2, None), (7, 3, 2, None)],
)
def test_tessellation_layer_sizes(p, q, layers, expected):
    tess = hyperbolic_tessellation(p, q, layers)
    sizes = list(Counter(label[0] for label in tess.labels).values())
    if expected is not None:
        assert sizes == expected
    assert sizes == _ring_sizes_by_face_counts(p, q, layers)


@pytest.mark.parametrize("p,q,layers", [(4, 5, 3), (3, 7, 3), (5, 4, 3), (7, 3, 3), (6, 4, 2)])
def test_tessellation_structure(p, q, layers):
    tess = hyperbolic_tessellation(p, q, layers)
    g = tess.graph
    assert tess.faces is not None and tess.boundary is not None
    boundary = set(tess.boundary)
    interior = [v for v in range(g.vertex_count) if v not in boundary]
    assert all(g.degree(v) == q for v in interior)
    assert np.all(g.degrees <= q)
    assert all(len(face) == p for face in tess.faces)
    # Euler characteristic of a disk
    assert g.vertex_count - g.edge_count + len(tess.faces) == 1
    # consistently oriented: every directed edge is used by at most one face
    directed = Counter(
        (face[i], face[(i + 1) % len(face)]) for face in tess.faces for i in range(len(face))
    )
    assert max(directed.values()) == 1
    for u, v in directed:
        assert g.has_edge(u, v)
    assert len(set(tess.labels)) == g.vertex_count


def test_tessellation_center_degree():
    assert hyperbolic_tessellation(4, 5, 1).graph.degree(0) == 5


@pytest.mark.parametrize("p,q", [(3, 6), (4, 4), (6, 3), (3, 5)])
def test_tessellation_not_hyperbolic(p, q):
    with pytest.raises(NotHyperbolicError):
        hyperbolic_tessellation(p, q, 1)


@pytest.mark.parametrize("layers,vertices,edges,faces", [(1, 7, 12, 6), (2, 19, 42, 24)])
def test_triangulated_disk_counts(layers, vertices, edges, faces):
    disk = triangulated_disk(layers)
    assert disk.graph.vertex_count == vertices
    assert disk.graph.edge_count == edges
    assert disk.faces is not None
    assert len(disk.faces) == faces
    assert disk.graph.degree(disk.center) == 6


def test_triangulated_disk_orientation():
    disk = triangulated_disk(3)
    xy = hex_positions(disk.labels)
    assert disk.faces is not None and disk.boundary is not None
    for face in disk.faces:
        assert _signed_area(xy[list(face)]) > 0
    assert _signed_area(xy[list(disk.boundary)]) > 0
    assert len(disk.boundary) == 18
    interior = set(range(disk.graph.vertex_count)) - set(disk.boundary)
    assert all(disk.graph.degree(v) == 6 for v in interior)


def test_random_connected_graph():
    gen = random_connected_graph(40, 25, np.random.default_rng(5))
    assert gen.graph.vertex_count == 40
    assert gen.graph.edge_count == 39 + 25
    # the chord count is capped by the complete graph
    assert random_connected_graph(4, 100, np.random.default_rng(0)).graph.edge_count == 6


def test_family_spec_parse_and_exhaustion():
    spec = FamilySpec.parse("lattice:d=2")
    assert spec.params == {"d": 2}
    assert str(spec) == "lattice:d=2"
    exhaustion = spec.exhaustion(3)
    assert exhaustion.graph.vertex_count == 2 * 3 * 3 + 2 * 3 + 1
    assert exhaustion.sphere.size == 4 * 3
    assert exhaustion.graph.labels is not None
    assert exhaustion.graph.labels[exhaustion.center] == (0, 0)


def test_family_spec_tree_exhaustion_is_the_whole_tree():
    exhaustion = FamilySpec.parse("tree:branching=2,kind=rooted").exhaustion(3)
    assert exhaustion.graph.vertex_count == 15
    assert exhaustion.sphere.size == 8


@pytest.mark.parametrize(
    "text,match",
    [
        ("moebius", "Unknown family"),
        ("lattice:radius=3", "Unknown parameters"),
        ("tree:b", "key=value"),
    ],
)
def test_family_spec_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        FamilySpec.parse(text)
