from nlpot import build_graph
from nlpot.capmod import PathFamily, extremal_length, p_capacity, p_modulus


def main():
    # two parallel paths of 3 edges between vertex 0 and vertex 1
    g = build_graph([(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1)])
    family = PathFamily.connector([0], [1])
    result = p_modulus(g, family, 2.0)
    assert abs(result.value - 2 / 3) < 1e-5
    assert result.lower_bound <= result.value
    assert abs(result.value - p_capacity(g, [0], [1], 2.0)) < 1e-5
    assert abs(extremal_length(g, family, 2.0) * result.value - 1) < 1e-5
