from nlpot._task import ExecutionState, Task
from nlpot.experiments._pipeline import Pipeline, SolvedPipeline, TaskGraph
from nlpot.experiments._recipes import RECIPES, Row
from nlpot.experiments._runner import (
    RUN_COLUMNS,
    RunResult,
    collect_rows,
    execute,
    manifest_path_for,
    render_table,
    run,
    solve_spec,
    write_table,
)
from nlpot.experiments._spec import ExperimentSpec, load_spec, parse_spec

__all__ = (
    "RECIPES",
    "RUN_COLUMNS",
    "ExecutionState",
    "ExperimentSpec",
    "Pipeline",
    "Row",
    "RunResult",
    "SolvedPipeline",
    "Task",
    "TaskGraph",
    "collect_rows",
    "execute",
    "load_spec",
    "manifest_path_for",
    "parse_spec",
    "render_table",
    "run",
    "solve_spec",
    "write_table",
)
