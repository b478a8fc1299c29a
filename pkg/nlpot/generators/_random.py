from __future__ import annotations

import numpy as np

from nlpot._config import check_vertex_budget
from nlpot._graph import Graph
from nlpot.generators._base import GeneratedGraph


def random_connected_graph(
    n: int, extra_edges: int, rng: np.random.Generator
) -> GeneratedGraph:
    """A uniformly relabelled random recursive tree on `n` vertices plus `extra_edges` chords.

    The number of chords is capped by the number of missing edges of the complete graph.
    """
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got {n}")
    if extra_edges < 0:
        raise ValueError(f"extra_edges must be nonnegative, got {extra_edges}")
    check_vertex_budget(n, f"random_connected_graph({n})")
    perm = rng.permutation(n)
    parents = np.array([rng.integers(0, v) for v in range(1, n)], dtype=np.int64)
    tree = np.stack([perm[parents], perm[1:]], axis=1)
    present = {(min(u, v), max(u, v)) for u, v in tree.tolist()}

    budget = min(extra_edges, n * (n - 1) // 2 - len(present))
    added: list[tuple[int, int]] = []
    while len(added) < budget:
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        pair = (min(u, v), max(u, v))
        if pair not in present:
            present.add(pair)
            added.append(pair)
    edges = np.concatenate([tree, np.array(added, dtype=np.int64).reshape(-1, 2)])
    return GeneratedGraph(
        graph=Graph(n, edges),
        family="random",
        params={"n": n, "extra_edges": extra_edges},
        center=0,
    )
