from __future__ import annotations

import logging
import math
from functools import partial
from typing import TYPE_CHECKING, Callable, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph, VertexSet, hop_distances
from nlpot.capmod import (
    BoundaryProxy,
    ModulusConfig,
    capacity_curve,
    classify_capacity_trend,
    cheeger_constant_exact,
    decay_exponent,
    null_family_trend,
    power_transform_samples,
    resolving_check,
)
from nlpot.circlepack import (
    CirclePackConfig,
    DiskPacking,
    from_generated,
    geometric_boundary_radii,
    pack_disk,
)
from nlpot.experiments._pipeline import Pipeline
from nlpot.generators import FamilySpec, random_connected_graph, triangulated_disk
from nlpot.packing import (
    approach_paths,
    blocking_metric,
    blocking_radii,
    divergence_check,
    metric_lp_norm,
    packing_metric,
    verify_packing,
)
from nlpot.potential import (
    SolverConfig,
    dirichlet_energy,
    energy_directional_derivative,
    energy_laplacian_identity_residual,
    liouville_probe,
)

if TYPE_CHECKING:
    from nlpot.experiments._spec import ExperimentSpec

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-10
DERIVATIVE_RTOL = 1e-5
HOMOGENEITY_RTOL = 1e-12
FD_STEP = 1e-6
NAN = math.nan


class Row(NamedTuple):
    """One CSV line: a measured quantity of one family at one exponent and radius or scale."""

    family: str
    p: float
    r_or_scale: float
    quantity: str
    value: float
    residual: float
    verdict: str


Recipe = Callable[["ExperimentSpec"], Pipeline]


def _family(spec: ExperimentSpec, default: FamilySpec) -> FamilySpec:
    return spec.family if spec.family is not None else default


# maeda-scan


def _capacity_rows(
    family: FamilySpec, radii: Tuple[int, ...], cfg: SolverConfig, rng: np.random.Generator
) -> List[Row]:
    curve = capacity_curve(family, cfg.p, radii, cfg)
    name = str(family)
    rows = [
        Row(name, cfg.p, radius, "capacity", value, residual, "")
        for radius, value, residual in zip(curve.radii, curve.capacities, curve.residuals)
    ]
    rows.append(
        Row(
            name,
            cfg.p,
            curve.radii[-1],
            "trend",
            decay_exponent(curve.radii, curve.capacities),
            max(curve.residuals),
            classify_capacity_trend(curve.radii, curve.capacities),
        )
    )
    return rows


def _index_rows(family: str, rng: np.random.Generator, *per_p: List[Row]) -> List[Row]:
    trends = [row for rows in per_p for row in rows if row.quantity == "trend"]
    parabolic = [row.p for row in trends if row.verdict == "parabolic-trend"]
    upper = min(parabolic) if parabolic else NAN
    below = [
        row.p
        for row in trends
        if row.verdict == "nonparabolic-trend" and (math.isnan(upper) or row.p < upper)
    ]
    lower = max(below) if below else NAN
    radius = trends[-1].r_or_scale if trends else NAN
    return [
        Row(family, NAN, radius, "index-lower", lower, NAN, "bracket"),
        Row(family, NAN, radius, "index-upper", upper, NAN, "bracket"),
    ]


def maeda_scan(spec: ExperimentSpec) -> Pipeline:
    """Capacity curves per exponent and the parabolic index bracket they imply."""
    family = _family(spec, FamilySpec("lattice", {"d": 2}))
    radii = spec.radii((2, 4, 8, 16))
    pipeline = Pipeline()
    names = []
    for p in sorted(set(spec.ps((1.5, 2.0, 3.0)))):
        name = f"capacity p={p:g}"
        cfg = spec.solver_config(p)
        pipeline.add(name, partial(_capacity_rows, family, radii, cfg), emits=True)
        names.append(name)
    pipeline.add("index", partial(_index_rows, str(family)), depends_on=names, emits=True)
    return pipeline


# null-scan


def _null_rows(
    family: FamilySpec,
    p: float,
    radii: Tuple[int, ...],
    cfg: ModulusConfig,
    rng: np.random.Generator,
) -> List[Row]:
    trend = null_family_trend(family, p, radii, cfg)
    rows = [
        Row(trend.family, p, radius, "modulus", value, value - bound, "")
        for radius, value, bound in zip(trend.radii, trend.moduli, trend.lower_bounds)
    ]
    rows.append(Row(trend.family, p, radii[-1], "trend", trend.moduli[-1], NAN, trend.verdict))
    return rows


def null_scan(spec: ExperimentSpec) -> Pipeline:
    """Modulus of the centre-to-sphere connector on growing balls, per exponent."""
    family = _family(spec, FamilySpec("lattice", {"d": 2}))
    radii = spec.radii((2, 4, 8))
    cfg = spec.modulus_config()
    pipeline = Pipeline()
    for p in sorted(set(spec.ps((1.5, 2.0, 3.0)))):
        pipeline.add(f"modulus p={p:g}", partial(_null_rows, family, p, radii, cfg), emits=True)
    return pipeline


# identity-suite


def _identity_rows(
    p: float, instances: int, max_vertices: int, rng: np.random.Generator
) -> List[Row]:
    identity = derivative = homogeneity = 0.0
    for _ in range(instances):
        n = int(rng.integers(4, max_vertices + 1))
        g = random_connected_graph(n, n, rng).graph
        f = rng.normal(size=n)
        identity = max(identity, energy_laplacian_identity_residual(g, f, p))

        direction = rng.normal(size=n)
        exact = energy_directional_derivative(g, f, direction, p)
        forward = dirichlet_energy(g, f + FD_STEP * direction, p)
        backward = dirichlet_energy(g, f - FD_STEP * direction, p)
        central = (forward - backward) / (2 * FD_STEP)
        derivative = max(derivative, abs(exact - central) / max(abs(exact), abs(central), 1.0))

        c = float(rng.uniform(0.25, 4.0) * rng.choice([-1.0, 1.0]))
        expected = abs(c) ** p * dirichlet_energy(g, f, p)
        homogeneity = max(homogeneity, abs(dirichlet_energy(g, c * f, p) - expected) / expected)
    family = f"random:n<={max_vertices}"
    checks = [
        ("energy-identity", identity, IDENTITY_TOL),
        ("directional-derivative", derivative, DERIVATIVE_RTOL),
        ("homogeneity", homogeneity, HOMOGENEITY_RTOL),
    ]
    return [
        Row(family, p, instances, quantity, value, tolerance, _passed(value, tolerance))
        for quantity, value, tolerance in checks
    ]


def _passed(value: float, tolerance: float) -> str:
    return "pass" if value <= tolerance else "fail"


def identity_suite(spec: ExperimentSpec) -> Pipeline:
    """Energy identity, directional derivative and homogeneity on random graphs."""
    instances = spec.count("instances", 200)
    vertices = spec.count("vertices", 100)
    pipeline = Pipeline()
    for p in sorted(set(spec.ps((1.5, 2.0, 3.0, 4.0)))):
        pipeline.add(
            f"identities p={p:g}", partial(_identity_rows, p, instances, vertices), emits=True
        )
    return pipeline


# liouville-probe


def _oscillation_rows(
    family: FamilySpec, radii: Tuple[int, ...], cfg: SolverConfig, rng: np.random.Generator
) -> List[Row]:
    seed = int(rng.integers(2**31))
    profile = liouville_probe(family, cfg.p, radii, "random-fixed-seed", cfg, seed=seed)
    return [
        Row(profile.family, cfg.p, radius, "oscillation", value, NAN, "")
        for radius, value in zip(profile.radii, profile.oscillation)
    ]


def liouville_scan(spec: ExperimentSpec) -> Pipeline:
    """Oscillation of p-harmonic extensions of random boundary data on growing balls."""
    family = _family(spec, FamilySpec("lattice", {"d": 2}))
    radii = spec.radii((4, 8, 16))
    pipeline = Pipeline()
    for p in sorted(set(spec.ps((2.0,)))):
        pipeline.add(
            f"oscillation p={p:g}",
            partial(_oscillation_rows, family, radii, spec.solver_config(p)),
            emits=True,
        )
    return pipeline


# cheeger-check


Instance = Tuple[Graph, float, VertexSet]


def _cheeger_instance(family: FamilySpec, radius: int, rng: np.random.Generator) -> Instance:
    gen = family.generate(radius)
    g = gen.graph
    h = cheeger_constant_exact(g)
    # the support is the half of the vertices closest to the centre
    order = np.argsort(hop_distances(g, gen.center), kind="stable")
    return g, h, np.sort(order[: g.vertex_count // 2])


def _cheeger_rows(family: str, rng: np.random.Generator, instance: Instance) -> List[Row]:
    g, h, _ = instance
    return [Row(family, NAN, g.vertex_count, "cheeger-constant", h, NAN, "exact")]


def _functional_rows(
    family: str,
    p: float,
    samples: int,
    rng: np.random.Generator,
    instance: Instance,
) -> List[Row]:
    g, h, support = instance
    checks = power_transform_samples(g, support, h, p, samples, rng)
    worst = max(check.c1 for check in checks)
    ok = all(check.bound_ok for check in checks if check.applicable)
    return [Row(family, p, samples, "functional-c1", worst, 1.0 / h, "pass" if ok else "fail")]


def cheeger_check(spec: ExperimentSpec) -> Pipeline:
    """Exact Cheeger constant and the functional inequality on random compact supports."""
    family = _family(spec, FamilySpec("tree", {"branching": 2}))
    radius = spec.radii((3,))[0]
    samples = spec.count("samples", 50)
    name = str(family)
    pipeline = Pipeline()
    pipeline.add("instance", partial(_cheeger_instance, family, radius))
    pipeline.add("cheeger", partial(_cheeger_rows, name), depends_on=["instance"], emits=True)
    for p in sorted(set(spec.ps((1.5, 2.0, 3.0)))):
        pipeline.add(
            f"functional p={p:g}",
            partial(_functional_rows, name, p, samples),
            depends_on=["instance"],
            emits=True,
        )
    return pipeline


# obstruction-demo


def _pack(
    layers: int, ratio: float, cfg: CirclePackConfig, rng: np.random.Generator
) -> Tuple[DiskPacking, int]:
    t = from_generated(triangulated_disk(layers))
    anchor = t.boundary[0]
    dp = pack_disk(t, geometric_boundary_radii(t, anchor, ratio), cfg)
    logger.debug("packed %d circles in %d sweeps", t.graph.vertex_count, dp.sweeps)
    return dp, anchor


def _packing_rows(
    family: str, rng: np.random.Generator, packed: Tuple[DiskPacking, int]
) -> List[Row]:
    dp, _ = packed
    m = packing_metric(dp.packing, dp.triangulation.graph, tol=1e-6)
    valid = verify_packing(dp.packing, tol=1e-6).valid
    return [
        Row(family, NAN, NAN, "angle-residual", dp.angle_residual, NAN, ""),
        Row(
            family,
            2.0,
            NAN,
            "packing-metric-norm",
            metric_lp_norm(m, 2.0),
            dp.tangency_residual,
            "valid" if valid else "overlapping",
        ),
    ]


def _pinch_point(dp: DiskPacking, anchor: int) -> npt.NDArray[np.float64]:
    """A point just outside the pinched circle, where the boundary circles accumulate."""
    centers = dp.centers
    outward = centers[anchor] - centers.mean(axis=0)
    return centers[anchor] + 1.5 * dp.radii[anchor] * outward / np.linalg.norm(outward)


def _resolving_rows(
    family: str,
    p: float,
    fractions: Sequence[float],
    cfg: ModulusConfig,
    rng: np.random.Generator,
    packed: Tuple[DiskPacking, int],
) -> List[Row]:
    dp, anchor = packed
    g = dp.triangulation.graph
    m = packing_metric(dp.packing, g, tol=1e-6)
    point = _pinch_point(dp, anchor)
    reach = float(np.max(np.linalg.norm(dp.centers - point, axis=1)))
    scales = [fraction * reach for fraction in fractions]
    proxy = BoundaryProxy.at_point(point, scales)
    result = resolving_check(g, m, proxy, p, cfg, positions=dp.centers)
    rows = [
        Row(family, p, scale, "resolving-modulus", value, NAN, "")
        for scale, value in zip(result.scales, result.moduli)
    ]
    ratio = result.moduli[-1] / result.moduli[0] if result.moduli[0] > 0 else 0.0
    rows.append(Row(family, p, result.scales[-1], "resolving-ratio", ratio, NAN, result.verdict))
    return rows


def _blocking_rows(
    family: str,
    n_max: int,
    paths: int,
    floor: float,
    rng: np.random.Generator,
    packed: Tuple[DiskPacking, int],
) -> List[Row]:
    dp, anchor = packed
    g = dp.triangulation.graph
    centers = dp.centers
    point = _pinch_point(dp, anchor)
    br = blocking_radii(dp.packing, g, point, n_max)
    rows = [
        Row(family, NAN, n, "blocking-radius", radius, NAN, "certified" if ok else "uncertified")
        for n, (radius, ok) in enumerate(zip(br.radii, br.certificates), start=1)
    ]
    if br.truncated:
        rows.append(Row(family, NAN, len(br), "truncation", len(br), NAN, br.reason or ""))
    bm = blocking_metric(dp.packing, g, br, floor=floor, tol=1e-6)
    rows.append(
        Row(
            family,
            2.0,
            len(br),
            "blocking-norm",
            bm.norm_d,
            bm.constant,
            "disjoint" if bm.supports_disjoint else "overlapping",
        )
    )
    chosen = approach_paths(g, centers, br.anchor, count=paths)
    for i, profile in enumerate(divergence_check(g, bm.metric, bm.phi, chosen, br, centers)):
        rows.append(
            Row(
                family,
                NAN,
                i,
                "phi-end",
                float(profile.phi_values[-1]),
                profile.slack,
                "reaches-target" if profile.reaches_target else "short",
            )
        )
        rows.append(
            Row(
                family,
                NAN,
                i,
                "path-length",
                profile.length,
                profile.increment,
                "telescoping-ok" if profile.telescoping_ok else "telescoping-violated",
            )
        )
        rows.extend(
            Row(family, NAN, n, "term-sum", float(value), NAN, f"path {i}")
            for n, value in enumerate(profile.term_sums, start=1)
        )
    return rows


def obstruction_demo(spec: ExperimentSpec) -> Pipeline:
    """Circle pack a disk that pinches at a boundary vertex and check the pinch point.

    The accumulation point sits just outside the pinched circle. The resolving check measures
    the modulus of paths into Euclidean neighbourhoods of that point, at the given fractions of
    the largest distance from it to a circle centre. The blocking metric is built around the
    same point.
    """
    layers = int(spec.packing.get("layers", 6))
    ratio = float(spec.packing.get("ratio", 0.7))
    n_max = int(spec.packing.get("n_max", 12))
    paths = int(spec.packing.get("paths", 5))
    floor = float(spec.packing.get("floor", 1e-6))
    family = f"disk:layers={layers}"
    pipeline = Pipeline()
    pipeline.add("pack", partial(_pack, layers, ratio, spec.circle_pack_config()))
    pipeline.add("packing", partial(_packing_rows, family), depends_on=["pack"], emits=True)
    fractions = spec.scales((0.4, 0.2, 0.1, 0.05))
    for p in sorted(set(spec.ps((2.0,)))):
        pipeline.add(
            f"resolve p={p:g}",
            partial(_resolving_rows, family, p, fractions, spec.modulus_config()),
            depends_on=["pack"],
            emits=True,
        )
    pipeline.add(
        "blocking",
        partial(_blocking_rows, family, n_max, paths, floor),
        depends_on=["pack"],
        emits=True,
    )
    return pipeline


RECIPES: Dict[str, Recipe] = {
    "cheeger-check": cheeger_check,
    "identity-suite": identity_suite,
    "liouville-probe": liouville_scan,
    "maeda-scan": maeda_scan,
    "null-scan": null_scan,
    "obstruction-demo": obstruction_demo,
}
