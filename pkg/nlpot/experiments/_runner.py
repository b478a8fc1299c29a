from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import platform
import sys
import time
from dataclasses import dataclass
from importlib import metadata
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

from nlpot._io import format_float
from nlpot.executors import SyncExecutor
from nlpot.experiments._pipeline import SolvedPipeline
from nlpot.experiments._recipes import RECIPES
from nlpot.experiments._spec import ExperimentSpec

logger = logging.getLogger(__name__)

RUN_COLUMNS = ("task", "family", "p", "R_or_scale", "quantity", "value", "residual", "verdict")
_VERSIONED = ("nlpot", "numpy", "scipy", "networkx", "graphlib2", "anyio")


@dataclass(frozen=True)
class RunResult:
    csv_path: str
    manifest_path: str
    rows: int
    sha256: str
    wall_time: float


def manifest_path_for(csv_path: str) -> str:
    """`results/z2.csv` keeps its manifest in `results/z2.manifest.json`."""
    base, _ = os.path.splitext(csv_path)
    return base + ".manifest.json"


def versions() -> Dict[str, str]:
    found = {"python": platform.python_version()}
    for name in _VERSIONED:
        try:
            found[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            found[name] = "not installed"
    return found


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def render_table(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a header row; floats are written with `repr` so they round trip exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buf.getvalue()


def write_table(
    path: Optional[str],
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: Mapping[str, Any],
    extra: Optional[Mapping[str, Any]] = None,
) -> Optional[str]:
    """Write a CSV and its manifest sidecar.

    `None` or `-` writes the CSV to stdout and the manifest to stderr. Returns the manifest path
    when one was written to a file.
    """
    text = render_table(columns, rows)
    target = "-" if path is None else path
    manifest = {
        "config": dict(config),
        "csv": os.path.basename(target),
        "columns": list(columns),
        "rows": text.count("\n") - 1,
        "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "versions": versions(),
        **(extra or {}),
    }
    if target == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        json.dump(manifest, sys.stderr, indent=2, sort_keys=True, default=str)
        sys.stderr.write("\n")
        return None
    directory = os.path.dirname(target)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    manifest_path = manifest_path_for(target)
    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True, default=str)
        f.write("\n")
    return manifest_path


def solve_spec(spec: ExperimentSpec) -> SolvedPipeline:
    return RECIPES[spec.recipe](spec).solve()


def execute(spec: ExperimentSpec, solved: SolvedPipeline) -> Dict[str, Any]:
    """Run the pipeline with `spec.jobs` worker threads (1 runs in the calling thread)."""
    if spec.jobs == 1:
        return solved.execute_sync(SyncExecutor(), spec.seed)
    import anyio

    from nlpot.executors._concurrent import ConcurrentExecutor

    return anyio.run(solved.execute_async, ConcurrentExecutor(spec.jobs), spec.seed)


def collect_rows(solved: SolvedPipeline, results: Mapping[str, Any]) -> list[tuple[Any, ...]]:
    """Rows of the emitting tasks, in task id order, each prefixed with its task name."""
    return [
        (task.name, *row)
        for task in solved.tasks
        if task.emits
        for row in results[task.name]
    ]


def run(spec: ExperimentSpec) -> RunResult:
    start = time.perf_counter()
    solved = solve_spec(spec)
    logger.info(
        "running %s: %d tasks, seed %d, %d jobs",
        spec.recipe,
        len(solved.tasks),
        spec.seed,
        spec.jobs,
    )
    rows = collect_rows(solved, execute(spec, solved))
    elapsed = time.perf_counter() - start
    manifest_path = write_table(
        spec.output,
        RUN_COLUMNS,
        rows,
        spec.as_dict(),
        {"tasks": list(solved.names), "wall_time_seconds": elapsed},
    )
    digest = hashlib.sha256(render_table(RUN_COLUMNS, rows).encode("utf-8")).hexdigest()
    logger.info("wrote %d rows to %s in %.2fs", len(rows), spec.output, elapsed)
    return RunResult(
        csv_path=spec.output,
        manifest_path=manifest_path or "",
        rows=len(rows),
        sha256=digest,
        wall_time=elapsed,
    )
