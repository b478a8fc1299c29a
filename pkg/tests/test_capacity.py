import warnings

import numpy as np
import pytest

from nlpot import build_graph, lattice_box, regular_tree
from nlpot.capmod import capacitor, capacity_curve, p_capacity, tree_capacity
from nlpot.exceptions import ConfigError, OverlapError
from nlpot.generators import FamilySpec
from nlpot.potential import DirichletProblem, SolverConfig, dirichlet_energy, solve_dirichlet_exact


def _parallel_paths(k: int, n: int):
    """k internally disjoint paths of n edges between vertex 0 and vertex 1."""
    edges = []
    next_vertex = 2
    for _ in range(k):
        chain = [0] + list(range(next_vertex, next_vertex + n - 1)) + [1]
        next_vertex += n - 1
        edges.extend(zip(chain[:-1], chain[1:]))
    return build_graph(edges)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
@pytest.mark.parametrize("n", [1, 4, 7])
def test_path_capacity(p, n):
    path = build_graph([(k, k + 1) for k in range(n)])
    cfg = SolverConfig(p=p, tolerance=1e-12)
    assert p_capacity(path, [0], [n], p, cfg) == pytest.approx(n ** (1 - p), rel=1e-8)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("k,n", [(2, 3), (3, 5)])
def test_parallel_paths_add_up(p, k, n):
    g = _parallel_paths(k, n)
    cfg = SolverConfig(p=p, tolerance=1e-12)
    assert p_capacity(g, [0], [1], p, cfg) == pytest.approx(k * n ** (1 - p), rel=1e-8)


@pytest.mark.parametrize("depth", [1, 3, 6])
def test_binary_tree_capacity_at_p2(depth):
    tree = regular_tree(2, depth)
    value = p_capacity(tree.graph, [tree.center], tree.marked, 2.0)
    assert value == pytest.approx(1 / (1 - 2.0**-depth), rel=1e-9)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize(
    "branching,depth,kind", [(2, 5, "rooted"), (3, 3, "rooted"), (3, 4, "regular")]
)
def test_tree_capacity_closed_form(p, branching, depth, kind):
    tree = regular_tree(branching, depth, kind=kind)
    cfg = SolverConfig(p=p, tolerance=1e-11)
    value = p_capacity(tree.graph, [tree.center], tree.marked, p, cfg)
    assert value == pytest.approx(tree_capacity(branching, depth, p, kind), rel=1e-7)


def test_tree_capacity_examples():
    assert tree_capacity(2, 3, 2.0) == pytest.approx(8 / 7)
    # a rooted binary tree of depth 2 has 2 edges on the first level and 4 on the second
    assert tree_capacity(2, 2, 3.0) == pytest.approx((2**-0.5 + 4**-0.5) ** -2)
    with pytest.raises(ValueError, match="p must be"):
        tree_capacity(2, 2, 1.0)


def test_overlapping_plates():
    path = build_graph([(0, 1), (1, 2)])
    with pytest.raises(OverlapError):
        p_capacity(path, [0, 1], [1, 2], 2.0)


def test_empty_plate():
    path = build_graph([(0, 1), (1, 2)])
    with pytest.raises(ValueError, match="must not be empty"):
        p_capacity(path, [], [2], 2.0)


def test_no_interior_needs_no_solve():
    edge = build_graph([(0, 1)])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        result = capacitor(edge, [0], [1], 2.5)
    assert result.value == 1
    assert result.residual == 0


def test_p2_capacity_matches_exact_linear_solve():
    box = lattice_box(2, 3)
    g = box.graph
    boundary = np.flatnonzero(g.degrees < 4)
    result = capacitor(g, [box.center], boundary, 2.0, SolverConfig(p=2.0, tolerance=1e-11))
    exact = solve_dirichlet_exact(
        DirichletProblem(
            g,
            np.concatenate([[box.center], boundary]),
            np.concatenate([[1.0], np.zeros(boundary.size)]),
        )
    )
    assert result.value == pytest.approx(dirichlet_energy(g, exact, 2.0), rel=1e-9)
    assert result.residual <= 1e-11


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_capacity_does_not_grow_when_the_domain_shrinks(p):
    box = lattice_box(2, 3)
    g = box.graph
    boundary = np.flatnonzero(g.degrees < 4)
    small = p_capacity(g, [box.center], boundary, p)
    # moving the grounded plate inwards enlarges B and can only increase the capacity
    inner = np.flatnonzero(np.abs(np.array(box.labels)).sum(axis=1) >= 2)
    assert p_capacity(g, [box.center], inner, p) >= small


def test_capacity_curve_on_the_binary_tree():
    curve = capacity_curve(FamilySpec("tree", {"branching": 2}), 2.0, [2, 3, 4, 5, 6])
    assert curve.radii == (2, 3, 4, 5, 6)
    assert curve.capacities == pytest.approx([1 / (1 - 2.0**-r) for r in curve.radii], rel=1e-9)
    assert all(1 < c <= 2 for c in curve.capacities)
    assert curve.is_nonincreasing()
    assert curve.vertex_counts == tuple(2 ** (r + 1) - 1 for r in curve.radii)


def test_capacity_curve_on_the_square_lattice():
    curve = capacity_curve(FamilySpec("lattice", {"d": 2}), 2.0, [1, 2, 3, 4])
    assert curve.capacities[0] == pytest.approx(4)
    assert all(b < a for a, b in zip(curve.capacities, curve.capacities[1:]))
    assert max(curve.residuals) <= 1e-9


@pytest.mark.parametrize("radii", [[], [3, 2], [0, 1], [2, 2]])
def test_capacity_curve_rejects_bad_radii(radii):
    with pytest.raises(ConfigError, match="radii"):
        capacity_curve(FamilySpec("lattice"), 2.0, radii)


@pytest.mark.slow
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_deep_binary_tree_capacity(p):
    depths = [3, 6, 9, 12]
    curve = capacity_curve(FamilySpec("tree", {"branching": 2}), p, depths)
    assert curve.is_nonincreasing()
    expected = [tree_capacity(2, d, p) for d in depths]
    assert list(curve.capacities) == pytest.approx(expected, rel=1e-5)
    # the infinite tree keeps (2^(1/(p-1)) - 1)^(p-1) > 0
    limit = (2 ** (1 / (p - 1)) - 1) ** (p - 1)
    assert limit > 0
    assert curve.capacities[-1] >= limit * (1 - 1e-5)
    if p <= 2:
        assert curve.capacities[-1] >= 0.9
