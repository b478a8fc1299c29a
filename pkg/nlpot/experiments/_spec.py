"""Experiment specs: INI files archived next to the results they produced.

    [experiment]
    recipe = maeda-scan
    seed = 7
    output = results/z2.csv
    jobs = 2

    [family]
    name = lattice
    d = 2

    [grid]
    p = 1.5, 2, 3
    radii = 4, 8, 16

    [solver]
    tolerance = 1e-9
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, TypeVar

from nlpot.capmod import ModulusConfig
from nlpot.circlepack import CirclePackConfig
from nlpot.exceptions import ConfigError, SpecError
from nlpot.experiments._recipes import RECIPES
from nlpot.generators import FamilySpec
from nlpot.generators._family import _coerce
from nlpot.potential import SolverConfig

T = TypeVar("T")

SECTIONS = ("experiment", "family", "grid", "solver", "modulus", "packing")
# values accepted in [grid] and [packing]; everything else is rejected
GRID_KEYS = ("p", "radii", "scales", "instances", "vertices", "layers", "samples")
PACKING_KEYS = ("layers", "ratio", "n_max", "paths", "floor", "tolerance")


@dataclass(frozen=True)
class ExperimentSpec:
    recipe: str
    seed: int = 0
    output: str = "results.csv"
    jobs: int = 1
    family: Optional[FamilySpec] = None
    grid: Mapping[str, Tuple[float, ...]] = field(default_factory=dict)
    solver: Mapping[str, Any] = field(default_factory=dict)
    modulus: Mapping[str, Any] = field(default_factory=dict)
    packing: Mapping[str, float] = field(default_factory=dict)

    def ps(self, default: Tuple[float, ...]) -> Tuple[float, ...]:
        return self.grid.get("p", default)

    def radii(self, default: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(int(r) for r in self.grid.get("radii", default))

    def scales(self, default: Tuple[float, ...]) -> Tuple[float, ...]:
        return self.grid.get("scales", default)

    def count(self, key: str, default: int) -> int:
        values = self.grid.get(key)
        return default if values is None else int(values[0])

    def solver_config(self, p: float) -> SolverConfig:
        return SolverConfig(p=p, **self.solver)

    def modulus_config(self) -> ModulusConfig:
        return ModulusConfig(**self.modulus)

    def circle_pack_config(self) -> CirclePackConfig:
        if "tolerance" in self.packing:
            return CirclePackConfig(tolerance=float(self.packing["tolerance"]))
        return CirclePackConfig()

    def with_seed(self, seed: int) -> ExperimentSpec:
        return replace(self, seed=seed)

    def as_dict(self) -> Dict[str, Any]:
        """Plain-data echo of the spec, as written to the run manifest."""
        return {
            "recipe": self.recipe,
            "seed": self.seed,
            "output": self.output,
            "jobs": self.jobs,
            "family": None if self.family is None else str(self.family),
            "grid": {key: list(values) for key, values in sorted(self.grid.items())},
            "solver": dict(sorted(self.solver.items())),
            "modulus": dict(sorted(self.modulus.items())),
            "packing": dict(sorted(self.packing.items())),
        }


def _convert(section: str, key: str, raw: str, kind: Callable[[str], T]) -> T:
    try:
        return kind(raw)
    except ValueError:
        raise SpecError(f"[{section}] {key}: cannot read {raw!r} as {kind.__name__}") from None


def _numbers(section: str, key: str, raw: str) -> Tuple[float, ...]:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise SpecError(f"[{section}] {key}: expected a comma separated list of numbers")
    return tuple(_convert(section, key, item, float) for item in items)


def _typed(entries: Mapping[str, str]) -> Dict[str, Any]:
    return {key: _coerce(value) for key, value in entries.items()}


def parse_spec(text: str) -> ExperimentSpec:
    """Parse and validate a spec; every problem is reported as a `SpecError`."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise SpecError(f"Malformed spec file: {exc}") from exc
    unknown = [name for name in parser.sections() if name not in SECTIONS]
    if unknown:
        raise SpecError(f"Unknown sections {unknown}, expected a subset of {list(SECTIONS)}")
    if not parser.has_section("experiment") or "recipe" not in parser["experiment"]:
        raise SpecError("The spec needs an [experiment] section with a recipe")
    experiment = parser["experiment"]
    extra = set(experiment) - {"recipe", "seed", "output", "jobs"}
    if extra:
        raise SpecError(f"[experiment] unknown keys {sorted(extra)}")

    family = None
    if parser.has_section("family"):
        entries = dict(parser["family"])
        name = entries.pop("name", None)
        if name is None:
            raise SpecError("[family] needs a name")
        try:
            family = FamilySpec(name, _typed(entries))
        except ConfigError as exc:
            raise SpecError(f"[family] {exc}") from exc

    grid: Dict[str, Tuple[float, ...]] = {}
    if parser.has_section("grid"):
        for key, raw in parser["grid"].items():
            if key not in GRID_KEYS:
                raise SpecError(f"[grid] unknown key {key!r}, expected one of {list(GRID_KEYS)}")
            grid[key] = _numbers("grid", key, raw)

    packing: Dict[str, float] = {}
    if parser.has_section("packing"):
        for key, raw in parser["packing"].items():
            if key not in PACKING_KEYS:
                raise SpecError(f"[packing] unknown key {key!r}")
            packing[key] = _convert("packing", key, raw, float)

    spec = ExperimentSpec(
        recipe=experiment["recipe"].strip(),
        seed=_convert("experiment", "seed", experiment.get("seed", "0"), int),
        output=experiment.get("output", "results.csv").strip(),
        jobs=_convert("experiment", "jobs", experiment.get("jobs", "1"), int),
        family=family,
        grid=grid,
        solver=_typed(parser["solver"]) if parser.has_section("solver") else {},
        modulus=_typed(parser["modulus"]) if parser.has_section("modulus") else {},
        packing=packing,
    )
    validate_spec(spec)
    return spec


def validate_spec(spec: ExperimentSpec) -> None:
    if spec.recipe not in RECIPES:
        raise SpecError(f"Unknown recipe {spec.recipe!r}, expected one of {sorted(RECIPES)}")
    if spec.jobs < 1:
        raise SpecError(f"[experiment] jobs must be >= 1, got {spec.jobs}")
    try:
        spec.solver_config(2.0)
        spec.modulus_config()
        spec.circle_pack_config()
    except (ConfigError, TypeError) as exc:
        raise SpecError(f"Invalid solver settings: {exc}") from exc


def load_spec(path: str) -> ExperimentSpec:
    try:
        with open(path, encoding="utf-8") as f:
            return parse_spec(f.read())
    except OSError as exc:
        raise SpecError(f"Cannot read spec file {path!r}: {exc}") from exc
