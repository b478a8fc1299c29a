from __future__ import annotations

from typing import Literal

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph
from nlpot.generators._base import GeneratedGraph

TreeKind = Literal["rooted", "regular"]


def _children_count(branching: int, depth_of_parent: int, kind: TreeKind) -> int:
    if kind == "rooted" or depth_of_parent == 0:
        return branching
    return branching - 1


def tree_layer_sizes(branching: int, depth: int, kind: TreeKind = "rooted") -> list[int]:
    sizes = [1]
    for level in range(depth):
        sizes.append(sizes[-1] * _children_count(branching, level, kind))
    return sizes


def regular_tree(
    branching: int, depth: int, *, kind: TreeKind = "rooted"
) -> GeneratedGraph:
    """Finite tree of the given depth, labelled by child-index addresses.

    `kind="rooted"`: every internal vertex has `branching` children, so `branching=2` is the
    binary tree (root degree 2, other internal vertices degree 3).
    `kind="regular"`: the root has `branching` children and every other internal vertex
    `branching - 1`, i.e. the ball of radius `depth` in the `branching`-regular tree.

    Vertices are numbered breadth first; the leaves at full depth are `marked`.
    """
    if branching < 2:
        raise ValueError(f"branching must be >= 2, got {branching}")
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    if kind not in ("rooted", "regular"):
        raise ValueError(f"unknown tree kind {kind!r}")
    sizes = tree_layer_sizes(branching, depth, kind)
    check_vertex_budget(sum(sizes), f"regular_tree({branching}, {depth}, kind={kind!r})")

    labels: list[tuple[int, ...]] = [()]
    edges: list[tuple[int, int]] = []
    frontier = [0]
    for level in range(depth):
        n_children = _children_count(branching, level, kind)
        next_frontier: list[int] = []
        for parent in frontier:
            for child_idx in range(n_children):
                child = len(labels)
                labels.append(labels[parent] + (child_idx,))
                edges.append((parent, child))
                next_frontier.append(child)
        frontier = next_frontier
    return GeneratedGraph(
        graph=Graph(len(labels), edges, labels),
        family="tree",
        params={"branching": branching, "depth": depth, "kind": kind},
        center=0,
        marked=tuple(frontier),
    )
