from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping

import numpy as np

from nlpot.exceptions import ConfigError
from nlpot.generators._base import Exhaustion, GeneratedGraph, exhaustion_ball
from nlpot.generators._disk import triangulated_disk
from nlpot.generators._lattice import lattice_box
from nlpot.generators._product import cartesian_product
from nlpot.generators._random import random_connected_graph
from nlpot.generators._tessellation import hyperbolic_tessellation
from nlpot.generators._tree import regular_tree


def _lattice(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    return lattice_box(int(params.get("d", 2)), radius)


def _tree(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    return regular_tree(
        int(params.get("branching", 2)), radius, kind=params.get("kind", "rooted")
    )


def _product(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    tree = regular_tree(
        int(params.get("branching", 3)), radius, kind=params.get("kind", "regular")
    )
    return cartesian_product(tree, lattice_box(1, radius))


def _tessellation(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    return hyperbolic_tessellation(int(params.get("p", 4)), int(params.get("q", 5)), radius)


def _disk(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    return triangulated_disk(radius)


def _random(params: Mapping[str, Any], radius: int) -> GeneratedGraph:
    rng = np.random.default_rng(int(params.get("seed", 0)))
    return random_connected_graph(
        int(params.get("n", 50)), int(params.get("extra_edges", 25)), rng
    )


_BUILDERS: Dict[str, Callable[[Mapping[str, Any], int], GeneratedGraph]] = {
    "lattice": _lattice,
    "tree": _tree,
    "product": _product,
    "tessellation": _tessellation,
    "disk": _disk,
    "random": _random,
}

_PARAMS = {
    "lattice": {"d"},
    "tree": {"branching", "kind"},
    "product": {"branching", "kind"},
    "tessellation": {"p", "q"},
    "disk": set(),
    "random": {"n", "extra_edges", "seed"},
}


def _coerce(value: str) -> Any:
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            pass
    return value


@dataclass(frozen=True)
class FamilySpec:
    """A graph family that can be grown to any radius.

    `lattice` (param `d`), `tree` (`branching`, `kind`), `product` (a tree times a Z-segment of
    the same radius), `tessellation` (`p`, `q`), `disk` and `random` (`n`, `extra_edges`,
    `seed`; ignores the radius when generating).
    """

    name: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in _BUILDERS:
            raise ConfigError(
                f"Unknown family {self.name!r}, expected one of {sorted(_BUILDERS)}"
            )
        unknown = set(self.params) - _PARAMS[self.name]
        if unknown:
            raise ConfigError(f"Unknown parameters {sorted(unknown)} for family {self.name!r}")

    @classmethod
    def parse(cls, text: str) -> FamilySpec:
        """Parse `name` or `name:key=value,key=value`, e.g. `tree:branching=2,kind=rooted`."""
        name, _, rest = text.strip().partition(":")
        params: dict[str, Any] = {}
        for item in filter(None, (part.strip() for part in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"Expected key=value in family spec, got {item!r}")
            params[key.strip()] = _coerce(value.strip())
        return cls(name.strip(), params)

    def generate(self, radius: int) -> GeneratedGraph:
        return _BUILDERS[self.name](self.params, radius)

    def exhaustion(self, radius: int) -> Exhaustion:
        """The hop ball of radius `radius` around the family's centre."""
        return exhaustion_ball(self.generate(radius), radius)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
