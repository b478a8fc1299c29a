"""The `nlpot` command line.

Every subcommand is a thin wrapper over one library operation. Tables go to `-o/--output` as CSV
with a `.manifest.json` sidecar (or to stdout without one when the output is `-`); messages and
logs go to stderr.

Exit codes: 0 success, 2 bad input (spec, config or file format), 3 computation error,
4 vertex budget exceeded (raise it with the `NLPOT_VERTEX_BUDGET` environment variable).
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import replace
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, TextIO

import numpy as np

from nlpot._graph import hop_distances, natural_metric
from nlpot._io import read_graph, read_vertex_function, write_graph, write_vertex_function
from nlpot.capmod import (
    BoundaryProxy,
    ModulusConfig,
    capacity_curve,
    cheeger_constant_exact,
    classify_capacity_trend,
    null_family_trend,
    parabolic_index_estimate,
    power_transform_samples,
    resolving_check,
)
from nlpot.circlepack import (
    CirclePackConfig,
    from_generated,
    geometric_boundary_radii,
    pack_disk,
    read_triangulation,
    write_triangulation,
)
from nlpot.exceptions import (
    ConfigError,
    FormatError,
    NlpotException,
    SizeLimitError,
    SpecError,
)
from nlpot.experiments import ExperimentSpec, load_spec, run, write_table
from nlpot.experiments._spec import validate_spec
from nlpot.generators import FamilySpec, triangulated_disk
from nlpot.packing import (
    DEFAULT_FLOOR,
    DEFAULT_TANGENCY_TOL,
    approach_paths,
    blocking_metric,
    blocking_radii,
    contact_graph,
    divergence_check,
    metric_lp_norm,
    packing_metric,
    read_packing,
    verify_packing,
    write_packing,
)
from nlpot.potential import DirichletProblem, SolverConfig, harmonic_residual, solve_dirichlet

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTATION = 3
EXIT_SIZE_LIMIT = 4

TREND_COLUMNS = ("family", "p", "R_or_scale", "value", "residual", "verdict")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

Handler = Callable[[argparse.Namespace], int]


def _float_list(text: str) -> List[float]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma separated list of numbers")
    return [float(item) for item in items]


def _int_list(text: str) -> List[int]:
    values = _float_list(text)
    if any(v != int(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in values]


@contextmanager
def _output(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yield f


def _read(path: str, reader: Callable[[TextIO], Any]) -> Any:
    with open(path, encoding="utf-8") as f:
        return reader(f)


def _settings(args: argparse.Namespace) -> Dict[str, Any]:
    """The parsed arguments, as echoed into manifests."""
    return {key: value for key, value in sorted(vars(args).items()) if key != "handler"}


def _write_table(
    args: argparse.Namespace,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    write_table(args.output, columns, rows, _settings(args), extra)


def _label(path: str) -> str:
    return os.path.basename(path)


# graphs and potentials


def cmd_generate(args: argparse.Namespace) -> int:
    family = FamilySpec.parse(args.family)
    comments = [f"family {family}", f"radius {args.radius}"]
    if args.triangulation:
        t = from_generated(family.generate(args.radius))
        with _output(args.output) as out:
            write_triangulation(out, t, comments=comments)
        return EXIT_OK
    if args.ball:
        ex = family.exhaustion(args.radius)
        graph, center = ex.graph, ex.center
    else:
        gen = family.generate(args.radius)
        graph, center = gen.graph, gen.center
    with _output(args.output) as out:
        write_graph(out, graph, comments=[*comments, f"center {center}"])
    logger.info(
        "%s R=%d: %d vertices, %d edges", family, args.radius, graph.vertex_count, graph.edge_count
    )
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    g, _ = _read(args.graph, read_graph)
    data = _read(args.boundary, lambda f: read_vertex_function(f, g.vertex_count, partial=True))
    boundary = np.flatnonzero(np.isfinite(data))
    cfg = SolverConfig(p=args.p, tolerance=args.tolerance, method=args.method)
    prob = DirichletProblem(g, boundary, data[boundary])
    f = solve_dirichlet(prob, cfg)
    logger.info(
        "solved p=%g on %d interior vertices, residual %.3e",
        args.p,
        prob.interior.size,
        harmonic_residual(g, f, prob.interior, args.p),
    )
    with _output(args.output) as out:
        write_vertex_function(out, f)
    return EXIT_OK


# capacities and moduli


def cmd_capacity(args: argparse.Namespace) -> int:
    family = FamilySpec.parse(args.family)
    cfg = SolverConfig(p=args.p, tolerance=args.tolerance, method=args.method)
    curve = capacity_curve(family, args.p, args.radii, cfg)
    verdict = classify_capacity_trend(curve.radii, curve.capacities)
    last = len(curve.radii) - 1
    rows = [
        (str(family), args.p, radius, value, residual, verdict if i == last else "")
        for i, (radius, value, residual) in enumerate(
            zip(curve.radii, curve.capacities, curve.residuals)
        )
    ]
    _write_table(args, TREND_COLUMNS, rows, {"verdict": verdict})
    return EXIT_OK


def cmd_modulus(args: argparse.Namespace) -> int:
    family = FamilySpec.parse(args.family)
    trend = null_family_trend(family, args.p, args.radii, ModulusConfig(tolerance=args.tolerance))
    last = len(trend.radii) - 1
    rows = [
        (trend.family, args.p, radius, value, value - bound, trend.verdict if i == last else "")
        for i, (radius, value, bound) in enumerate(
            zip(trend.radii, trend.moduli, trend.lower_bounds)
        )
    ]
    _write_table(args, TREND_COLUMNS, rows, {"verdict": trend.verdict})
    return EXIT_OK


def _bound(value: Optional[float]) -> str:
    return "?" if value is None else f"{value:g}"


def cmd_scan_index(args: argparse.Namespace) -> int:
    family = FamilySpec.parse(args.family)
    estimate = parabolic_index_estimate(family, args.p, args.radii)
    rows = [
        (
            estimate.family,
            row.p,
            row.curve.radii[-1],
            row.decay_exponent,
            max(row.curve.residuals),
            row.verdict,
        )
        for row in estimate.rows
    ]
    _write_table(args, TREND_COLUMNS, rows, {"lower": estimate.lower, "upper": estimate.upper})
    print(
        f"parabolic index trend for {estimate.family}: "
        f"[{_bound(estimate.lower)}, {_bound(estimate.upper)}]",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_resolve_check(args: argparse.Namespace) -> int:
    g, metric = _read(args.graph, read_graph)
    m = natural_metric(g) if metric is None else metric
    proxy = BoundaryProxy.at_vertices(args.anchor, args.scales)
    result = resolving_check(
        g, m, proxy, args.p, ModulusConfig(tolerance=args.tolerance), far=args.far
    )
    last = len(result.scales) - 1
    rows = [
        (_label(args.graph), args.p, scale, value, size, result.verdict if i == last else "")
        for i, (scale, value, size) in enumerate(
            zip(result.scales, result.moduli, result.target_sizes)
        )
    ]
    _write_table(args, TREND_COLUMNS, rows, {"verdict": result.verdict})
    return EXIT_OK


def cmd_cheeger(args: argparse.Namespace) -> int:
    g, _ = _read(args.graph, read_graph)
    h = cheeger_constant_exact(g)
    order = np.argsort(hop_distances(g, args.center), kind="stable")
    support = np.sort(order[: g.vertex_count // 2])
    rng = np.random.default_rng(args.seed)
    name = _label(args.graph)
    rows: List[Sequence[Any]] = [(name, math.nan, g.vertex_count, h, math.nan, "exact")]
    for p in args.p:
        checks = power_transform_samples(g, support, h, p, args.samples, rng)
        ok = all(check.bound_ok for check in checks if check.applicable)
        worst = max(check.c1 for check in checks)
        rows.append((name, p, args.samples, worst, 1.0 / h, "pass" if ok else "fail"))
    _write_table(args, TREND_COLUMNS, rows)
    return EXIT_OK


# packings


def cmd_pack2d(args: argparse.Namespace) -> int:
    if args.triangulation is not None:
        t = _read(args.triangulation, read_triangulation)
    else:
        t = from_generated(triangulated_disk(args.layers))
    if not 0 <= args.anchor < len(t.boundary):
        raise ConfigError(f"--anchor must index the {len(t.boundary)} boundary vertices")
    if args.ratio is None:
        boundary_radii = np.ones(len(t.boundary))
    else:
        boundary_radii = geometric_boundary_radii(t, t.boundary[args.anchor], args.ratio)
    dp = pack_disk(t, boundary_radii, CirclePackConfig(tolerance=args.tolerance))
    logger.info(
        "packed %d circles in %d sweeps, tangency residual %.3e",
        dp.packing.count,
        dp.sweeps,
        dp.tangency_residual,
    )
    comments = [
        f"angle residual {dp.angle_residual!r}",
        f"tangency residual {dp.tangency_residual!r}",
        f"sweeps {dp.sweeps}",
    ]
    with _output(args.output) as out:
        write_packing(out, dp.packing, comments=comments)
    return EXIT_OK


def cmd_pack_verify(args: argparse.Namespace) -> int:
    p = _read(args.packing, read_packing)
    report = verify_packing(p, tol=args.tol)
    depth = max((overlap.depth for overlap in report.violations), default=0.0)
    rows = [
        ("balls", p.count),
        ("dimension", p.dimension),
        ("roundness", report.roundness),
        ("roundness-bound", p.roundness_bound),
        ("overlaps", len(report.violations)),
        ("max-overlap", depth),
        ("valid", str(report.valid).lower()),
    ]
    if not report.valid:
        logger.warning("%d overlapping pairs, deepest %.3e", len(report.violations), depth)
    _write_table(args, ("quantity", "value"), rows)
    return EXIT_OK


def cmd_pack_metric(args: argparse.Namespace) -> int:
    p = _read(args.packing, read_packing)
    cg = contact_graph(p, tol=args.tol)
    m = packing_metric(p, cg, tol=args.tol)
    rows = [(u, v, value) for (u, v), value in zip(cg.edges.tolist(), m.tolist())]
    _write_table(args, ("u", "v", "m"), rows, {"norm": metric_lp_norm(m, float(p.dimension))})
    return EXIT_OK


def cmd_pack_block(args: argparse.Namespace) -> int:
    p = _read(args.packing, read_packing)
    if len(args.anchor) != p.dimension:
        raise ConfigError(f"--anchor needs {p.dimension} coordinates, got {len(args.anchor)}")
    cg = contact_graph(p, tol=args.tol)
    br = blocking_radii(p, cg, args.anchor, args.n_max, unit=args.unit)
    bm = blocking_metric(p, cg, br, floor=args.floor, tol=args.tol)
    paths = approach_paths(cg, p.centers, br.anchor, count=args.paths)
    profiles = divergence_check(cg, bm.metric, bm.phi, paths, br, p.centers)
    rows: List[Sequence[Any]] = []
    for i, profile in enumerate(profiles):
        for step, (vertex, length, phi) in enumerate(
            zip(profile.path.vertices, profile.partial_sums, profile.phi_values)
        ):
            rows.append((i, step, vertex, "length", length))
            rows.append((i, step, vertex, "phi", phi))
        for n, value in enumerate(profile.term_sums, start=1):
            rows.append((i, n, -1, "term-sum", value))
    summary = {
        "radii": len(br),
        "truncated": br.truncated,
        "reason": br.reason,
        "norm": bm.norm_d,
        "constant": bm.constant,
        "supports_disjoint": bm.supports_disjoint,
        "telescoping_ok": all(profile.telescoping_ok for profile in profiles),
        "reaches_target": all(profile.reaches_target for profile in profiles),
    }
    _write_table(args, ("path", "index", "vertex", "kind", "value"), rows, {"summary": summary})
    print(
        f"{len(br)} blocking radii, norm {bm.norm_d:.6g}, "
        f"supports {'disjoint' if bm.supports_disjoint else 'overlapping'}",
        file=sys.stderr,
    )
    return EXIT_OK


# experiments


def cmd_identity_suite(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        recipe="identity-suite",
        seed=args.seed,
        output=args.output,
        grid={
            "p": tuple(args.p),
            "instances": (float(args.instances),),
            "vertices": (float(args.vertices),),
        },
    )
    validate_spec(spec)
    run(spec)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if args.output is not None:
        overrides["output"] = args.output
    spec = replace(spec, **overrides)
    validate_spec(spec)
    result = run(spec)
    print(
        f"wrote {result.rows} rows to {result.csv_path} (sha256 {result.sha256})",
        file=sys.stderr,
    )
    return EXIT_OK


def _add_output(parser: argparse.ArgumentParser, default: str = "-") -> None:
    parser.add_argument(
        "-o", "--output", default=default, help="output file, '-' for stdout (default: %(default)s)"
    )


def _add_solver(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=1e-9, help="max |Delta_p f| on V_int")
    parser.add_argument("--method", choices=("auto", "coordinate", "newton"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlpot", description="Discrete nonlinear potential theory on graphs and packings."
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def command(name: str, handler: Handler, summary: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary, description=summary)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("generate", cmd_generate, "Write a generated graph in the graph text format.")
    sub.add_argument("family", help="family spec, e.g. lattice:d=2 or tree:branching=2")
    sub.add_argument("--radius", type=int, required=True)
    sub.add_argument("--ball", action="store_true", help="write the hop ball around the centre")
    sub.add_argument(
        "--triangulation", action="store_true", help="write a triangulation for pack2d"
    )
    _add_output(sub)

    sub = command("solve", cmd_solve, "Solve a p-harmonic Dirichlet problem.")
    sub.add_argument("graph")
    sub.add_argument(
        "--boundary", required=True, help="'vertex value' lines; listed vertices are the boundary"
    )
    sub.add_argument("--p", type=float, default=2.0)
    _add_solver(sub)
    _add_output(sub)

    sub = command("capacity", cmd_capacity, "Capacity of the centre against growing spheres.")
    sub.add_argument("family")
    sub.add_argument("--p", type=float, default=2.0)
    sub.add_argument("--radii", type=_int_list, default=[2, 4, 8, 16])
    _add_solver(sub)
    _add_output(sub)

    sub = command("modulus", cmd_modulus, "Modulus of the centre-to-sphere connector family.")
    sub.add_argument("family")
    sub.add_argument("--p", type=float, default=2.0)
    sub.add_argument("--radii", type=_int_list, default=[2, 4, 8])
    sub.add_argument("--tolerance", type=float, default=1e-6, help="relative duality gap")
    _add_output(sub)

    sub = command("scan-index", cmd_scan_index, "Bracket the parabolic index of a family.")
    sub.add_argument("family")
    sub.add_argument("--p", type=_float_list, default=[1.5, 2.0, 3.0])
    sub.add_argument("--radii", type=_int_list, default=[2, 4, 8, 16])
    _add_output(sub)

    sub = command(
        "resolve-check", cmd_resolve_check, "Moduli of paths into shrinking balls at an anchor."
    )
    sub.add_argument("graph", help="graph file; edge weights, when present, are the metric")
    sub.add_argument("--anchor", type=_int_list, required=True, help="anchor vertices")
    sub.add_argument("--scales", type=_float_list, required=True, help="decreasing d_m radii")
    sub.add_argument("--far", type=_int_list, default=None, help="source vertices")
    sub.add_argument("--p", type=float, default=2.0)
    sub.add_argument("--tolerance", type=float, default=1e-6)
    _add_output(sub)

    sub = command("cheeger", cmd_cheeger, "Exact Cheeger constant and the functional check.")
    sub.add_argument("graph")
    sub.add_argument("--center", type=int, default=0, help="the support grows around it")
    sub.add_argument("--samples", type=int, default=50)
    sub.add_argument("--p", type=_float_list, default=[1.5, 2.0, 3.0])
    sub.add_argument("--seed", type=int, default=0)
    _add_output(sub)

    sub = command("pack2d", cmd_pack2d, "Circle pack a triangulated disk.")
    sub.add_argument("--layers", type=int, default=4, help="hexagonal disk size")
    sub.add_argument("--triangulation", default=None, help="triangulation file to pack instead")
    sub.add_argument(
        "--ratio", type=float, default=None, help="geometric boundary radii shrinking to --anchor"
    )
    sub.add_argument("--anchor", type=int, default=0, help="position on the boundary cycle")
    sub.add_argument("--tolerance", type=float, default=1e-10, help="angle sum tolerance")
    _add_output(sub)

    sub = command("pack-verify", cmd_pack_verify, "Check that the inner balls are disjoint.")
    sub.add_argument("packing")
    sub.add_argument("--tol", type=float, default=0.0, help="allowed overlap depth")
    _add_output(sub)

    sub = command("pack-metric", cmd_pack_metric, "Packing metric on the contact graph.")
    sub.add_argument("packing")
    sub.add_argument("--tol", type=float, default=DEFAULT_TANGENCY_TOL, help="tangency tolerance")
    _add_output(sub)

    sub = command("pack-block", cmd_pack_block, "Blocking metric profiles towards an anchor.")
    sub.add_argument("packing")
    sub.add_argument("--anchor", type=float, nargs="+", required=True, help="anchor coordinates")
    sub.add_argument("--n-max", type=int, default=12)
    sub.add_argument("--paths", type=int, default=5)
    sub.add_argument("--unit", type=float, default=None, help="length of r_1 = 1")
    sub.add_argument("--floor", type=float, default=DEFAULT_FLOOR)
    sub.add_argument("--tol", type=float, default=DEFAULT_TANGENCY_TOL)
    _add_output(sub)

    sub = command(
        "identity-suite", cmd_identity_suite, "Energy identities on random graphs, pass or fail."
    )
    sub.add_argument("--instances", type=int, default=200)
    sub.add_argument("--vertices", type=int, default=100)
    sub.add_argument("--p", type=_float_list, default=[1.5, 2.0, 3.0, 4.0])
    sub.add_argument("--seed", type=int, default=0)
    _add_output(sub)

    sub = command("run", cmd_run, "Run an experiment spec file.")
    sub.add_argument("spec")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=None)
    sub.add_argument("-o", "--output", default=None, help="overrides the spec's output")
    return parser


def _fail(exc: BaseException, code: int) -> int:
    print(f"nlpot: error: {exc}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(
        level=args.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        return int(args.handler(args))
    except SizeLimitError as exc:
        return _fail(exc, EXIT_SIZE_LIMIT)
    except (SpecError, ConfigError, FormatError, OSError) as exc:
        return _fail(exc, EXIT_INPUT)
    except (NlpotException, ValueError) as exc:
        logger.debug("computation failed", exc_info=True)
        return _fail(exc, EXIT_COMPUTATION)


if __name__ == "__main__":
    sys.exit(main())
