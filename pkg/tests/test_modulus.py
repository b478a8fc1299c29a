import math

import numpy as np
import pytest

from nlpot import Path, build_graph, random_connected_graph, regular_tree
from nlpot.capmod import (
    ModulusConfig,
    PathFamily,
    extremal_length,
    null_family_trend,
    p_capacity,
    p_modulus,
)
from nlpot.exceptions import ConfigError, InvalidPathError, OverlapError
from nlpot.generators import FamilySpec
from nlpot.potential import SolverConfig


def _path_with_spur(n: int):
    """A path 0..n plus a pendant edge at vertex 1, which no family path uses."""
    return build_graph([(k, k + 1) for k in range(n)] + [(1, n + 1)])


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [1, 3, 6])
def test_single_path_modulus(p, n):
    g = _path_with_spur(n)
    result = p_modulus(g, PathFamily.explicit([range(n + 1)]), p)
    assert result.value == pytest.approx(n ** (1 - p), rel=1e-6)
    on_path = g.path_edges(range(n + 1))
    assert result.metric[on_path] == pytest.approx(np.full(n, 1 / n), rel=1e-6)
    assert result.metric[g.edge_id(1, n + 1)] == 0
    assert extremal_length(g, PathFamily.explicit([range(n + 1)]), p) == pytest.approx(
        n ** (p - 1), rel=1e-6
    )


def test_empty_family_is_null():
    g = build_graph([(0, 1), (1, 2)])
    result = p_modulus(g, PathFamily.explicit([]), 2.0)
    assert result.value == 0
    assert np.all(result.metric == 0)
    assert result.extremal_length == math.inf
    assert extremal_length(g, PathFamily.explicit([]), 3.0) == math.inf


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_disjoint_paths_add_up(p):
    # two paths 0-1-2-3 and 4-5 that share no edge
    g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
    family = PathFamily.explicit([[0, 1, 2, 3], [4, 5]])
    assert p_modulus(g, family, p).value == pytest.approx(3 ** (1 - p) + 1, rel=1e-6)


def test_modulus_grows_with_the_family():
    g = build_graph([(0, 1), (1, 2), (2, 3), (0, 4), (4, 3), (1, 4)])
    small = PathFamily.explicit([[0, 1, 2, 3]])
    large = PathFamily.explicit([[0, 1, 2, 3], [0, 4, 3], [0, 1, 4, 3]])
    assert p_modulus(g, small, 2.0).value <= p_modulus(g, large, 2.0).value + 1e-9


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_connector_modulus_equals_capacity(p, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(14, 10, rng).graph
    A, B = [0, 1], [12, 13]
    capacity = p_capacity(g, A, B, p, SolverConfig(p=p, tolerance=1e-11))
    result = p_modulus(g, PathFamily.connector(A, B), p)
    assert result.value == pytest.approx(capacity, rel=1e-4)
    assert result.lower_bound <= result.value * (1 + 1e-9)
    assert result.lower_bound == pytest.approx(capacity, rel=1e-4)
    assert extremal_length(g, PathFamily.connector(A, B), p) == pytest.approx(
        1 / capacity, rel=1e-4
    )


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_connector_duality_on_larger_graphs(p):
    g = random_connected_graph(120, 60, np.random.default_rng(5)).graph
    A, B = [0, 1], [118, 119]
    # the default solver config picks Newton steps below p = 2
    capacity = p_capacity(g, A, B, p)
    assert p_modulus(g, PathFamily.connector(A, B), p).value == pytest.approx(capacity, rel=1e-4)

def test_connector_constraints_are_tight_where_they_carry_weight():
    g = random_connected_graph(12, 9, np.random.default_rng(7)).graph
    result = p_modulus(g, PathFamily.connector([0], [11]), 2.0)
    carrying = result.multipliers > 1e-3 * result.multipliers.max()
    tight = set(result.tight_paths(g, rtol=1e-3))
    assert all(path in tight for path, w in zip(result.paths, carrying) if w)
    # every constraint holds for the rescaled metric
    lengths = [float(np.sum(result.metric[g.path_edges(path)])) for path in result.paths]
    assert min(lengths) == pytest.approx(1.0, rel=1e-5)


def test_metric_scaling_consistency():
    g = random_connected_graph(10, 6, np.random.default_rng(3)).graph
    result = p_modulus(g, PathFamily.connector([0], [9]), 3.0)
    scaled = 2.0 * result.metric
    lengths = [float(np.sum(scaled[g.path_edges(path)])) for path in result.paths]
    assert min(lengths) == pytest.approx(2.0, rel=1e-5)
    assert float(np.sum(scaled**3.0)) == pytest.approx(8 * result.value)


def test_family_validation():
    with pytest.raises(OverlapError):
        PathFamily.connector([0, 1], [1, 2])
    with pytest.raises(ValueError, match="nonempty"):
        PathFamily.connector([], [1])
    g = build_graph([(0, 1), (1, 2)])
    with pytest.raises(InvalidPathError):
        p_modulus(g, PathFamily.explicit([[0, 2]]), 2.0)
    with pytest.raises(InvalidPathError, match="at least one edge"):
        p_modulus(g, PathFamily.explicit([[1]]), 2.0)
    with pytest.raises(ValueError, match="not in the graph"):
        p_modulus(g, PathFamily.connector([0], [7]), 2.0)
    with pytest.raises(ConfigError):
        p_modulus(g, PathFamily.connector([0], [2]), 1.0)


def test_explicit_family_accepts_paths_and_sequences():
    family = PathFamily.explicit([Path((0, 1)), [1, 2]])
    assert family.paths == (Path((0, 1)), Path((1, 2)))


@pytest.mark.parametrize("kwargs", [{"tolerance": 0.0}, {"max_rounds": 0}, {"inner_tolerance": 0}])
def test_modulus_config_validation(kwargs):
    with pytest.raises(ConfigError):
        ModulusConfig(**kwargs)


def test_binary_tree_root_to_leaves_is_not_null():
    trend = null_family_trend(FamilySpec("tree", {"branching": 2}), 2.0, [2, 3, 4])
    assert trend.moduli == pytest.approx([1 / (1 - 2.0**-r) for r in (2, 3, 4)], rel=1e-4)
    assert trend.verdict == "not-null-trend"


def test_tree_connector_modulus_matches_capacity_for_every_p():
    tree = regular_tree(3, 3, kind="regular")
    for p in (1.5, 2.5):
        modulus = p_modulus(tree.graph, PathFamily.connector([tree.center], tree.marked), p)
        capacity = p_capacity(tree.graph, [tree.center], tree.marked, p)
        assert modulus.value == pytest.approx(capacity, rel=1e-4)
        # one constraint per leaf
        assert len(modulus.paths) == len(tree.marked)

