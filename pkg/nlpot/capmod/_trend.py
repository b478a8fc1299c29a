from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Sequence, Tuple

import numpy as np

from nlpot.capmod._capacity import CapacityCurve, capacity_curve
from nlpot.exceptions import ConfigError
from nlpot.generators import FamilySpec
from nlpot.potential import SolverConfig
from nlpot.potential._solver import MIN_EXPONENT

logger = logging.getLogger(__name__)

Verdict = Literal[
    "parabolic-trend",
    "nonparabolic-trend",
    "inconclusive",
    "null-trend",
    "not-null-trend",
    "resolving-trend",
    "not-resolving-trend",
]

MAX_EXPONENT = 8.0


@dataclass(frozen=True)
class TrendThresholds:
    """Constants of the trend verdicts. Verdicts are evidence from finite data, never proofs.

    A capacity sequence c_1, ..., c_n (increasing radii R_1, ..., R_n) is
    - nonparabolic if c_n >= nonparabolic_ratio * c_1 and (c_{n-1} - c_n) / c_{n-1} < flat_decrease
    - parabolic if c_n < parabolic_ratio * c_1, or if the slope of log c against log log R over
      the last two radii is <= loglog_slope
    - inconclusive otherwise.
    A modulus sequence is null if it is parabolic by the rule above or c_n < null_ratio * c_1.
    A resolving sequence (shrinking scales) must be nonincreasing and end below
    resolving_ratio * c_1. The default of 0.5 accepts short scale ladders; pass 0.1 for a
    stricter decay.
    """

    nonparabolic_ratio: float = 0.5
    flat_decrease: float = 0.02
    parabolic_ratio: float = 0.1
    loglog_slope: float = -0.5
    null_ratio: float = 1e-3
    resolving_ratio: float = 0.5

    def __post_init__(self) -> None:
        for name in ("nonparabolic_ratio", "flat_decrease", "parabolic_ratio", "resolving_ratio"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {value}")
        if not 0 < self.null_ratio < 1:
            raise ConfigError(f"null_ratio must lie in (0, 1), got {self.null_ratio}")
        if not self.loglog_slope < 0:
            raise ConfigError(f"loglog_slope must be negative, got {self.loglog_slope}")
        if self.parabolic_ratio >= self.nonparabolic_ratio:
            raise ConfigError("parabolic_ratio must be below nonparabolic_ratio")


def _loglog_slope(radii: Sequence[float], values: Sequence[float]) -> float:
    """Slope of log(value) against log(log(R)) over the last two entries, nan if undefined."""
    (r0, r1), (v0, v1) = radii[-2:], values[-2:]
    if min(r0, r1) <= math.e or v0 <= 0 or v1 <= 0:
        return math.nan
    return (math.log(v1) - math.log(v0)) / (math.log(math.log(r1)) - math.log(math.log(r0)))


def classify_capacity_trend(
    radii: Sequence[float],
    values: Sequence[float],
    thresholds: TrendThresholds | None = None,
) -> Verdict:
    th = thresholds or TrendThresholds()
    if len(values) < 2:
        return "inconclusive"
    first, previous, last = values[0], values[-2], values[-1]
    if first <= 0:
        return "parabolic-trend"
    if last >= th.nonparabolic_ratio * first and previous > 0:
        if (previous - last) / previous < th.flat_decrease:
            return "nonparabolic-trend"
    if last < th.parabolic_ratio * first:
        return "parabolic-trend"
    slope = _loglog_slope(radii, values)
    if not math.isnan(slope) and slope <= th.loglog_slope:
        return "parabolic-trend"
    return "inconclusive"


def classify_null_trend(
    radii: Sequence[float],
    values: Sequence[float],
    thresholds: TrendThresholds | None = None,
) -> Verdict:
    th = thresholds or TrendThresholds()
    if len(values) < 2:
        return "not-null-trend"
    if values[0] <= 0 or values[-1] < th.null_ratio * values[0]:
        return "null-trend"
    if classify_capacity_trend(radii, values, th) == "parabolic-trend":
        return "null-trend"
    return "not-null-trend"


def classify_resolving_trend(
    values: Sequence[float],
    thresholds: TrendThresholds | None = None,
    rtol: float = 1e-6,
) -> Verdict:
    """Moduli over decreasing scales: resolving when they shrink monotonically and markedly."""
    th = thresholds or TrendThresholds()
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        return "not-resolving-trend"
    if arr[0] <= 0:
        return "resolving-trend"
    monotone = bool(np.all(arr[1:] <= arr[:-1] * (1 + rtol) + 1e-15))
    if monotone and arr[-1] <= th.resolving_ratio * arr[0]:
        return "resolving-trend"
    return "not-resolving-trend"


def decay_exponent(radii: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares exponent a in value ~ C R^-a over the radii > 1 with positive values."""
    r = np.asarray(radii, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    keep = (r > 1) & (v > 0)
    if np.count_nonzero(keep) < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(r[keep]), np.log(v[keep]), 1)
    return float(-slope)


@dataclass(frozen=True)
class IndexRow:
    p: float
    verdict: Verdict
    decay_exponent: float
    curve: CapacityCurve


@dataclass(frozen=True)
class IndexEstimate:
    """Per-p verdicts and the bracket they imply for the parabolic index.

    Parabolicity is inherited by larger exponents, so `upper` is the smallest p with a parabolic
    trend and `lower` the largest p below it with a nonparabolic trend; either is None when the
    grid has no such exponent.
    """

    family: str
    rows: Tuple[IndexRow, ...]
    lower: float | None
    upper: float | None


def parabolic_index_estimate(
    family: FamilySpec,
    ps: Sequence[float],
    radii: Sequence[int],
    cfg: SolverConfig | None = None,
    thresholds: TrendThresholds | None = None,
) -> IndexEstimate:
    grid = sorted(set(float(p) for p in ps))
    if not grid:
        raise ConfigError("The exponent grid must not be empty")
    if grid[0] <= MIN_EXPONENT or grid[-1] > MAX_EXPONENT:
        raise ConfigError(f"Exponents must lie in ({MIN_EXPONENT}, {MAX_EXPONENT}], got {grid}")
    rows = []
    for p in grid:
        curve = capacity_curve(family, p, radii, cfg)
        verdict = classify_capacity_trend(curve.radii, curve.capacities, thresholds)
        logger.debug("%s p=%g: %s", family, p, verdict)
        rows.append(IndexRow(p, verdict, decay_exponent(curve.radii, curve.capacities), curve))
    parabolic = [row.p for row in rows if row.verdict == "parabolic-trend"]
    upper = min(parabolic) if parabolic else None
    below = [
        row.p
        for row in rows
        if row.verdict == "nonparabolic-trend" and (upper is None or row.p < upper)
    ]
    return IndexEstimate(str(family), tuple(rows), max(below) if below else None, upper)
