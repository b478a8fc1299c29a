import numpy as np
import pytest

from nlpot import build_graph, lattice_box, random_connected_graph
from nlpot.exceptions import ConfigError, MaxSweepsExceededError, NoInteriorWarning
from nlpot.generators import FamilySpec
from nlpot.potential import (
    DirichletProblem,
    SolverConfig,
    dirichlet_energy,
    harmonic_residual,
    liouville_probe,
    solve_dirichlet,
    solve_dirichlet_exact,
)


def _box_problem(R: int = 3) -> DirichletProblem:
    box = lattice_box(2, R)
    g = box.graph
    boundary = np.flatnonzero(g.degrees < 4)
    coords = np.array(box.labels, dtype=float)
    values = np.sin(coords[boundary, 0]) + coords[boundary, 1] ** 2 / R
    return DirichletProblem(g, boundary, values)


@pytest.mark.parametrize(
    "kwargs,match",
    [
        ({"p": 1.0}, "p must be"),
        ({"p": 1.01}, "p must be"),
        ({"p": float("inf")}, "p must be"),
        ({"p": 2.0, "tolerance": 0.0}, "tolerance"),
        ({"p": 2.0, "epsilon": -1.0}, "epsilon"),
        ({"p": 2.0, "max_sweeps": 0}, "max_sweeps"),
        ({"p": 2.0, "method": "multigrid"}, "method"),
    ],
)
def test_solver_config_validation(kwargs, match):
    with pytest.raises(ConfigError, match=match):
        SolverConfig(**kwargs)


def test_problem_validation():
    g = build_graph([(0, 1), (1, 2)])
    with pytest.raises(ValueError, match="must not be empty"):
        DirichletProblem(g, np.array([], dtype=np.int64), np.array([]))
    with pytest.raises(ValueError, match="boundary values"):
        DirichletProblem(g, np.array([0, 2]), np.array([1.0]))
    with pytest.raises(ValueError, match="distinct"):
        DirichletProblem(g, np.array([0, 0]), np.array([1.0, 2.0]))


def test_constant_boundary_gives_constant():
    problem = _box_problem()
    values = np.full(problem.boundary.size, 2.0)
    constant = DirichletProblem(problem.graph, problem.boundary, values)
    f = solve_dirichlet(constant, SolverConfig(p=3.0))
    assert np.all(f == 2.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 6.0])
@pytest.mark.parametrize("method", ["coordinate", "newton"])
def test_path_solution_is_linear(p, method):
    n = 6
    path = build_graph([(k, k + 1) for k in range(n)])
    problem = DirichletProblem(path, np.array([0, n]), np.array([0.0, 1.0]))
    cfg = SolverConfig(p=p, tolerance=1e-12, method=method)
    f = solve_dirichlet(problem, cfg, initial=np.zeros(n + 1))
    assert np.allclose(f, np.arange(n + 1) / n, atol=1e-8)


def test_four_cycle_symmetry():
    cycle = build_graph([(0, 1), (1, 2), (2, 3), (3, 0)])
    problem = DirichletProblem(cycle, np.array([0, 2]), np.array([0.0, 1.0]))
    f = solve_dirichlet(problem, SolverConfig(p=2.0))
    assert f[1] == pytest.approx(0.5)
    assert f[3] == pytest.approx(0.5)


@pytest.mark.parametrize("p", [1.5, 2.5, 4.0])
def test_solution_contract(p):
    problem = _box_problem()
    cfg = SolverConfig(p=p, tolerance=1e-8)
    f = solve_dirichlet(problem, cfg)
    assert np.array_equal(f[problem.boundary], problem.values)
    assert harmonic_residual(problem.graph, f, problem.interior, p) <= cfg.tolerance
    # maximum principle
    assert f.min() >= problem.values.min() - 1e-12
    assert f.max() <= problem.values.max() + 1e-12


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_strict_convexity_at_the_solution(p):
    problem = _box_problem()
    f = solve_dirichlet(problem, SolverConfig(p=p, tolerance=1e-8))
    energy = dirichlet_energy(problem.graph, f, p)
    rng = np.random.default_rng(17)
    for scale in (1e-1, 1e-2):
        g = np.zeros_like(f)
        g[problem.interior] = scale * rng.normal(size=problem.interior.size)
        assert dirichlet_energy(problem.graph, f + g, p) > energy


def test_nonconstant_boundary_has_positive_energy():
    problem = _box_problem()
    f = solve_dirichlet(problem, SolverConfig(p=2.5))
    assert dirichlet_energy(problem.graph, f, 2.5) > 0


def test_coordinate_sweeps_agree_with_exact_solve_at_p2():
    problem = _box_problem(4)
    exact = solve_dirichlet_exact(problem)
    swept = solve_dirichlet(
        problem, SolverConfig(p=2.0, tolerance=1e-10), initial=np.zeros(problem.graph.vertex_count)
    )
    assert np.max(np.abs(swept - exact)) <= 1e-6


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_newton_agrees_with_coordinate_descent(p):
    problem = _box_problem()
    coordinate = solve_dirichlet(problem, SolverConfig(p=p, tolerance=1e-9, method="coordinate"))
    newton = solve_dirichlet(problem, SolverConfig(p=p, tolerance=1e-9, method="newton"))
    assert np.max(np.abs(coordinate - newton)) <= 1e-6


def test_no_interior_warns_and_returns_boundary_data():
    edge = build_graph([(0, 1)])
    problem = DirichletProblem(edge, np.array([0, 1]), np.array([3.0, 4.0]))
    with pytest.warns(NoInteriorWarning):
        f = solve_dirichlet(problem, SolverConfig(p=2.0))
    assert f.tolist() == [3.0, 4.0]


def test_max_sweeps_exceeded_reports_residual():
    problem = _box_problem()
    cfg = SolverConfig(p=3.0, max_sweeps=1, tolerance=1e-12, method="coordinate")
    with pytest.raises(MaxSweepsExceededError) as exc_info:
        solve_dirichlet(problem, cfg, initial=np.zeros(problem.graph.vertex_count))
    assert exc_info.value.residual > cfg.tolerance
    assert exc_info.value.solution.shape == (problem.graph.vertex_count,)


def test_liouville_probe_constant_scheme():
    profile = liouville_probe(FamilySpec("lattice", {"d": 2}), 2.0, [4, 8], "constant")
    assert profile.oscillation == (0.0, 0.0)


def test_liouville_probe_lattice_ramp_keeps_oscillation():
    """The first coordinate is 2-harmonic, so the inner oscillation is r/R exactly"""
    profile = liouville_probe(FamilySpec("lattice", {"d": 2}), 2.0, [4, 8, 12], "coordinate-ramp")
    assert profile.inner_radii == (1, 2, 3)
    assert profile.oscillation == pytest.approx([0.25, 0.25, 0.25], abs=1e-8)


def test_liouville_probe_binary_tree_does_not_decay():
    """Voltage divider oracle: the root's children sit at 1/(2 - 2^-(R-1)) apart"""
    radii = [2, 3, 4, 5, 6, 7]
    profile = liouville_probe(
        FamilySpec("tree", {"branching": 2}), 2.0, radii, "coordinate-ramp"
    )
    expected = [1 / (2 - 2.0 ** -(R - 1)) for R in radii]
    assert profile.oscillation == pytest.approx(expected, rel=1e-7)
    assert min(profile.oscillation) > 0.5


def test_liouville_probe_random_boundary_on_tree():
    profile = liouville_probe(
        FamilySpec("tree", {"branching": 2}), 2.0, [3, 4, 5], "random-fixed-seed", seed=3
    )
    assert all(osc > 0 for osc in profile.oscillation)
    again = liouville_probe(
        FamilySpec("tree", {"branching": 2}), 2.0, [3, 4, 5], "random-fixed-seed", seed=3
    )
    assert again == profile


def test_auto_method_converges_below_p2_on_random_graphs():
    g = random_connected_graph(40, 20, np.random.default_rng(5)).graph
    problem = DirichletProblem(g, np.array([0, 1, 38, 39]), np.array([1.0, 1.0, 0.0, 0.0]))
    # a handful of coordinate sweeps is far from enough at p = 1.5
    cfg = SolverConfig(p=1.5, max_sweeps=50)
    assert cfg.method == "auto"
    f = solve_dirichlet(problem, cfg)
    assert harmonic_residual(g, f, problem.interior, 1.5) <= cfg.tolerance
    with pytest.raises(MaxSweepsExceededError):
        solve_dirichlet(problem, SolverConfig(p=1.5, max_sweeps=50, method="coordinate"))
