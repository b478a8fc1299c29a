from __future__ import annotations

from typing import List

import networkx as nx
import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph


def color_classes(g: Graph, vertices: npt.ArrayLike) -> List[npt.NDArray[np.int64]]:
    """Partition `vertices` into independent sets of `g`.

    Classes come in colour order and hold their vertices in increasing order, so sweeping the
    classes one after the other is a deterministic Gauss-Seidel order.
    """
    selected = np.unique(np.asarray(vertices, dtype=np.int64))
    if selected.size == 0:
        return []
    sub = g.to_networkx().subgraph(selected.tolist())
    coloring = nx.greedy_color(sub, strategy="largest_first")
    colors = np.array([coloring[int(v)] for v in selected], dtype=np.int64)
    return [selected[colors == c] for c in range(int(colors.max()) + 1)]
