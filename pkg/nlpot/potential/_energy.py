"""p-Dirichlet energy, the p-Laplacian and the identities tying them together.

With the oriented incidence matrix D of the graph, (Df)(e) = f(v) - f(u) for e = (u, v) and

    D_p(f)       = sum_e |Df(e)|^p
    Delta_p f    = -D^T phi(Df),   phi(x) = sign(x) |x|^(p-1)

so that <f, Delta_p f> = -D_p(f) and d/dt D_p(f + t g)|_{t=0} = -p <g, Delta_p f>.
"""
from __future__ import annotations

import numpy as np
import numpy.typing as npt

from nlpot._graph import Graph, VertexFunction, VertexSet


def signed_power(x: npt.NDArray[np.float64], exponent: float) -> npt.NDArray[np.float64]:
    """sign(x) |x|^exponent, which is 0 at x = 0 for every positive exponent."""
    return np.sign(x) * np.abs(x) ** exponent


def _check_exponent(p: float, lowest: float) -> None:
    if not p >= lowest or not np.isfinite(p):
        raise ValueError(f"exponent must be finite and >= {lowest}, got {p}")


def dirichlet_energy(g: Graph, f: VertexFunction, p: float) -> float:
    _check_exponent(p, 1.0)
    df = g.incidence @ np.asarray(f, dtype=np.float64)
    return float(np.sum(np.abs(df) ** p))


def p_laplacian(g: Graph, f: VertexFunction, p: float) -> VertexFunction:
    """Delta_p f(v) = sum over u ~ v of |f(u) - f(v)|^(p-2) (f(u) - f(v)).

    Edges with f(u) = f(v) contribute 0, also for p < 2.
    """
    _check_exponent(p, 1.0)
    df = g.incidence @ np.asarray(f, dtype=np.float64)
    return np.asarray(-(g.incidence.T @ signed_power(df, p - 1.0)), dtype=np.float64)


def pairing(f: VertexFunction, h: VertexFunction) -> float:
    """<f, h> = sum_v f(v) h(v)."""
    f_arr = np.asarray(f, dtype=np.float64)
    h_arr = np.asarray(h, dtype=np.float64)
    if f_arr.shape != h_arr.shape:
        raise ValueError(f"cannot pair functions of shapes {f_arr.shape} and {h_arr.shape}")
    return float(np.dot(f_arr, h_arr))


def energy_laplacian_identity_residual(g: Graph, f: VertexFunction, p: float) -> float:
    """|<f, Delta_p f> + D_p(f)| / (1 + D_p(f)); zero up to rounding for every f."""
    energy = dirichlet_energy(g, f, p)
    return abs(pairing(f, p_laplacian(g, f, p)) + energy) / (1.0 + energy)


def energy_directional_derivative(
    g: Graph, f: VertexFunction, direction: VertexFunction, p: float
) -> float:
    return -p * pairing(direction, p_laplacian(g, f, p))


def harmonic_residual(g: Graph, f: VertexFunction, interior: VertexSet, p: float) -> float:
    """max over `interior` of |Delta_p f|; 0 for an empty interior."""
    interior = np.asarray(interior, dtype=np.int64)
    if interior.size == 0:
        return 0.0
    return float(np.max(np.abs(p_laplacian(g, f, p)[interior])))
