from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from nlpot.packing._model import Packing

# |chordal diameter - factor * diam| <= LIFT_ERROR_CONSTANT * diam^2
LIFT_ERROR_CONSTANT = 3.0 * math.sqrt(3.0) / 8.0


@dataclass(frozen=True)
class LiftedPacking:
    """Centres on the unit sphere S^d in R^(d+1) and first-order chordal diameters."""

    points: npt.NDArray[np.float64]
    factors: npt.NDArray[np.float64]
    chordal_diameters: npt.NDArray[np.float64]
    error_bounds: npt.NDArray[np.float64]
    volume_proxy: float


def conformal_factor(z: npt.ArrayLike) -> npt.NDArray[np.float64]:
    sq = np.sum(np.atleast_2d(np.asarray(z, dtype=np.float64)) ** 2, axis=1)
    return 2.0 / (1.0 + sq)


def inverse_stereographic(z: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """z -> (2z, |z|^2 - 1) / (1 + |z|^2); the origin goes to the south pole."""
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    sq = np.sum(z**2, axis=1, keepdims=True)
    return np.hstack([2.0 * z, sq - 1.0]) / (1.0 + sq)


def stereographic_lift(p: Packing) -> LiftedPacking:
    factors = conformal_factor(p.centers)
    diam = p.diameters
    chordal = factors * diam
    return LiftedPacking(
        points=inverse_stereographic(p.centers),
        factors=factors,
        chordal_diameters=chordal,
        error_bounds=LIFT_ERROR_CONSTANT * diam**2,
        volume_proxy=float(np.sum(chordal**p.dimension)),
    )
