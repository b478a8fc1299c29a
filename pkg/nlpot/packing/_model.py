from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Tuple

import numpy as np
import numpy.typing as npt

from nlpot._io import _content_lines, format_float
from nlpot.exceptions import FormatError


@dataclass(frozen=True)
class Ball:
    """A quasi-ball, represented by the inner and outer balls around its centre.

    The quasi-ball contains its inner ball and is contained in its outer ball; diam = 2 r_out.
    """

    center: Tuple[float, ...]
    r_in: float
    r_out: float

    def __post_init__(self) -> None:
        if not 0 < self.r_in <= self.r_out or not math.isfinite(self.r_out):
            raise ValueError(f"Need 0 < r_in <= r_out < inf, got {self.r_in}, {self.r_out}")

    @property
    def diameter(self) -> float:
        return 2.0 * self.r_out

    @property
    def roundness(self) -> float:
        return self.r_out / self.r_in


class Packing:
    """Quasi-balls in R^d stored as arrays: `centers` (n, d), `r_in` (n,), `r_out` (n,).

    Disjointness is not checked on construction; see `verify_packing`.
    """

    __slots__ = ("centers", "r_in", "r_out", "roundness_bound")

    centers: npt.NDArray[np.float64]
    r_in: npt.NDArray[np.float64]
    r_out: npt.NDArray[np.float64]
    roundness_bound: float

    def __init__(
        self,
        centers: npt.ArrayLike,
        r_in: npt.ArrayLike,
        r_out: npt.ArrayLike | None = None,
        roundness_bound: float | None = None,
    ) -> None:
        c = np.asarray(centers, dtype=np.float64)
        if c.ndim != 2 or c.shape[1] < 1:
            raise ValueError(f"centers must have shape (n, d), got {c.shape}")
        inner = np.asarray(r_in, dtype=np.float64).reshape(-1)
        outer = inner.copy() if r_out is None else np.asarray(r_out, dtype=np.float64).reshape(-1)
        if inner.shape != (c.shape[0],) or outer.shape != (c.shape[0],):
            raise ValueError(f"Expected {c.shape[0]} inner and outer radii")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(outer))):
            raise ValueError("Centers and radii must be finite")
        if not (np.all(inner > 0) and np.all(outer >= inner)):
            raise ValueError("Radii must satisfy 0 < r_in <= r_out")
        realized = float(np.max(outer / inner)) if inner.size else 1.0
        if roundness_bound is None:
            roundness_bound = realized
        elif realized > roundness_bound * (1 + 1e-12):
            raise ValueError(
                f"Realized roundness {realized} exceeds the declared bound {roundness_bound}"
            )
        for arr in (c, inner, outer):
            arr.setflags(write=False)
        self.centers = c
        self.r_in = inner
        self.r_out = outer
        self.roundness_bound = float(roundness_bound)

    @classmethod
    def from_balls(cls, balls: Iterable[Ball], roundness_bound: float | None = None) -> Packing:
        balls = list(balls)
        if not balls:
            raise ValueError("A packing needs at least one ball")
        return cls(
            [b.center for b in balls],
            [b.r_in for b in balls],
            [b.r_out for b in balls],
            roundness_bound,
        )

    @property
    def dimension(self) -> int:
        return int(self.centers.shape[1])

    @property
    def count(self) -> int:
        return int(self.centers.shape[0])

    @property
    def diameters(self) -> npt.NDArray[np.float64]:
        return 2.0 * self.r_out

    @property
    def roundness(self) -> float:
        return float(np.max(self.r_out / self.r_in, initial=1.0))

    def ball(self, i: int) -> Ball:
        return Ball(tuple(self.centers[i].tolist()), float(self.r_in[i]), float(self.r_out[i]))

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(d={self.dimension}, balls={self.count})"


def write_packing(out: TextIO, p: Packing, *, comments: Sequence[str] = ()) -> None:
    """`packing <d> <count> <roundness_bound>` then one `x_1 ... x_d r_in r_out` line per ball."""
    for comment in comments:
        out.write(f"# {comment}\n")
    out.write(f"packing {p.dimension} {p.count} {format_float(p.roundness_bound)}\n")
    for center, inner, outer in zip(p.centers.tolist(), p.r_in.tolist(), p.r_out.tolist()):
        out.write(" ".join(format_float(x) for x in (*center, inner, outer)) + "\n")


def read_packing(source: TextIO) -> Packing:
    lines = iter(_content_lines(source))
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty packing file") from None
    parts = header.split()
    if len(parts) != 4 or parts[0] != "packing":
        raise FormatError(f"line {lineno}: expected 'packing <d> <count> <roundness_bound>'")
    try:
        d, count, bound = int(parts[1]), int(parts[2]), float(parts[3])
    except ValueError:
        raise FormatError(f"line {lineno}: malformed packing header {header!r}") from None
    rows = []
    for lineno, line in lines:
        try:
            values = [float(x) for x in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: expected {d + 2} numbers, got {line!r}") from None
        if len(values) != d + 2:
            raise FormatError(f"line {lineno}: expected {d + 2} numbers, got {len(values)}")
        rows.append(values)
    if len(rows) != count:
        raise FormatError(f"header declares {count} balls but the file has {len(rows)}")
    data = np.asarray(rows, dtype=np.float64).reshape(count, d + 2)
    try:
        return Packing(data[:, :d], data[:, d], data[:, d + 1], bound)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
