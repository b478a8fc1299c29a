from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Hashable, Literal, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._graph import ball
from nlpot.exceptions import ConfigError
from nlpot.generators import Exhaustion, FamilySpec
from nlpot.potential._solver import DirichletProblem, SolverConfig, solve_dirichlet

logger = logging.getLogger(__name__)

BoundaryScheme = Literal["coordinate-ramp", "random-fixed-seed", "constant"]


@dataclass(frozen=True)
class OscillationProfile:
    """Oscillation of the p-harmonic extension on the inner ball, one entry per radius.

    Boundary data is normalised to oscillation 1, so the entries are comparable across radii.
    A decaying profile is evidence of Liouville behaviour, not a proof.
    """

    family: str
    p: float
    scheme: BoundaryScheme
    radii: Tuple[int, ...]
    inner_radii: Tuple[int, ...]
    oscillation: Tuple[float, ...]


def _coordinate(family: str, label: Hashable) -> float:
    if family in ("lattice", "disk"):
        return float(label[0])  # type: ignore[index]
    if family == "product":
        return float(label[1][0])  # type: ignore[index]
    if family == "tree":
        # which subtree of the root the vertex lies in
        return float(label[0]) if label else 0.0  # type: ignore[index]
    raise ConfigError(f"The coordinate-ramp scheme has no coordinate for family {family!r}")


def boundary_data(
    exhaustion: Exhaustion,
    family: str,
    scheme: BoundaryScheme,
    rng: np.random.Generator,
) -> npt.NDArray[np.float64]:
    """Values on `exhaustion.sphere`, rescaled to [0, 1] unless they are constant."""
    sphere = exhaustion.sphere
    if scheme == "constant":
        return np.ones(sphere.size)
    if scheme == "coordinate-ramp":
        labels = exhaustion.graph.labels
        if labels is None:
            raise ConfigError(f"The coordinate-ramp scheme needs labelled vertices ({family!r})")
        raw = np.array([_coordinate(family, labels[v]) for v in sphere.tolist()])
    elif scheme == "random-fixed-seed":
        raw = rng.uniform(size=sphere.size)
    else:
        raise ConfigError(f"Unknown boundary scheme {scheme!r}")
    spread = raw.max() - raw.min()
    if spread == 0:
        return raw
    return (raw - raw.min()) / spread


def liouville_probe(
    family: FamilySpec,
    p: float,
    radii: Sequence[int],
    scheme: BoundaryScheme,
    cfg: SolverConfig | None = None,
    *,
    seed: int = 0,
) -> OscillationProfile:
    """Solve on growing exhaustion balls and record the oscillation on the ball of radius R // 4.

    The inner radius is at least 1. `random-fixed-seed` draws the boundary values from
    `numpy.random.default_rng(seed)` afresh for every radius.
    """
    cfg = SolverConfig(p=p) if cfg is None else replace(cfg, p=p)
    if list(radii) != sorted(set(radii)) or not radii:
        raise ConfigError(f"radii must be a nonempty increasing list, got {list(radii)}")
    oscillation = []
    inner_radii = []
    for radius in radii:
        exhaustion = family.exhaustion(radius)
        values = boundary_data(
            exhaustion, family.name, scheme, np.random.default_rng(seed)
        )
        problem = DirichletProblem(exhaustion.graph, exhaustion.sphere, values)
        f = solve_dirichlet(problem, cfg)
        inner_radius = max(1, radius // 4)
        inner = ball(exhaustion.graph, exhaustion.center, inner_radius)
        osc = float(f[inner].max() - f[inner].min())
        logger.debug("%s R=%d: inner oscillation %.6g", family, radius, osc)
        oscillation.append(osc)
        inner_radii.append(inner_radius)
    return OscillationProfile(
        family=str(family),
        p=p,
        scheme=scheme,
        radii=tuple(radii),
        inner_radii=tuple(inner_radii),
        oscillation=tuple(oscillation),
    )
