"""Run this file like python benchmarks/solve.py

It will print out results to the console and open web browser windows.
"""
import os

from pyinstrument.profiler import Profiler  # type: ignore[import]

from benchmarks.utils import ProblemSize, capacitor_problem
from nlpot.circlepack import CirclePackConfig, from_generated, pack_disk
from nlpot.generators import triangulated_disk
from nlpot.potential import SolverConfig, solve_dirichlet

INTERVAL = 10e-6  # 10 us


def solver_bench(size: ProblemSize, cfg: SolverConfig, iters: int, name: str) -> None:
    problem = capacitor_problem(size)
    solve_dirichlet(problem, cfg)
    p = Profiler(interval=INTERVAL)
    p.start()
    for _ in range(iters):
        solve_dirichlet(problem, cfg)
    p.stop()
    p.print()
    with open(f"bench_html/{name}.html", mode="w") as f:
        f.write(p.output_html())


def packing_bench(layers: int, iters: int, name: str) -> None:
    t = from_generated(triangulated_disk(layers))
    boundary = [1.0] * len(t.boundary)
    cfg = CirclePackConfig(tolerance=1e-10)
    p = Profiler(interval=INTERVAL)
    p.start()
    for _ in range(iters):
        pack_disk(t, boundary, cfg)
    p.stop()
    p.print()
    with open(f"bench_html/{name}.html", mode="w") as f:
        f.write(p.output_html())


SMALL_BALL = ProblemSize("lattice:d=2", 8)
LARGE_BALL = ProblemSize("lattice:d=2", 32)
TREE_BALL = ProblemSize("tree:branching=2", 10)


if __name__ == "__main__":
    if not os.path.exists("bench_html"):
        os.mkdir("bench_html")
    for p in (1.5, 3.0):
        solver_bench(
            SMALL_BALL,
            SolverConfig(p=p, method="coordinate"),
            iters=20,
            name=f"coordinate-p{p:g}-small_ball",
        )
        solver_bench(
            LARGE_BALL,
            SolverConfig(p=p, method="newton"),
            iters=5,
            name=f"newton-p{p:g}-large_ball",
        )
    solver_bench(
        TREE_BALL,
        SolverConfig(p=2.0, method="coordinate"),
        iters=20,
        name="coordinate-p2-tree_ball",
    )
    packing_bench(6, iters=5, name="pack-disk-6_layers")
