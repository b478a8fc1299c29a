import numpy as np

from nlpot import build_graph
from nlpot.potential import DirichletProblem, SolverConfig, dirichlet_energy, solve_dirichlet


def main():
    # a path with 4 edges, pinned to 0 and 1 at its ends
    g = build_graph([(0, 1), (1, 2), (2, 3), (3, 4)])
    problem = DirichletProblem(g, boundary=[0, 4], values=[0.0, 1.0])
    f = solve_dirichlet(problem, SolverConfig(p=3.0, tolerance=1e-12))
    assert np.allclose(f, [0.0, 0.25, 0.5, 0.75, 1.0])
    # every edge carries (1/4)^3
    assert np.isclose(dirichlet_energy(g, f, 3.0), 4 * 0.25**3)
