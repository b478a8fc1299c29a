from __future__ import annotations

from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from graphlib2 import TopologicalSorter

from nlpot._task import ExecutionState, Task, TaskCallable
from nlpot.api.executor import SupportsAsyncExecutor, SupportsSyncExecutor, SupportsTaskGraph
from nlpot.exceptions import DependencyCycleError


class TaskGraph:
    __slots__ = ("_uncopied_ts", "_copied_ts", "_static_order")

    def __init__(self, ts: TopologicalSorter[Task], static_order: Iterable[Task]) -> None:
        self._uncopied_ts = ts
        self._copied_ts: TopologicalSorter[Task] | None = None
        self._static_order = static_order

    def _sorter(self) -> TopologicalSorter[Task]:
        if self._copied_ts is None:
            self._copied_ts = self._uncopied_ts.copy()
        return self._copied_ts

    def get_ready(self) -> Iterable[Task]:
        return self._sorter().get_ready()  # type: ignore[no-any-return]

    def done(self, task: Task) -> None:
        self._sorter().done(task)

    def is_active(self) -> bool:
        return bool(self._sorter().is_active())

    def static_order(self) -> Iterable[Task]:
        return self._static_order


class SolvedPipeline:
    """Tasks in a fixed order, ready to be executed any number of times.

    Task ids follow the order in which tasks were added to the pipeline. Each execution spawns
    one child of `SeedSequence(seed)` per task id, so every task sees the same random stream
    whatever order an executor runs it in.
    """

    def __init__(
        self,
        tasks: Tuple[Task, ...],
        topological_sorter: TopologicalSorter[Task],
        static_order: Tuple[Task, ...],
    ) -> None:
        self.tasks = tasks
        self._topological_sorter = topological_sorter
        self._static_order = static_order

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(task.name for task in self.tasks)

    def _prepare_execution(
        self, seed: int
    ) -> Tuple[List[Any], SupportsTaskGraph, ExecutionState]:
        children = np.random.SeedSequence(seed).spawn(len(self.tasks))
        results: List[Any] = [None] * len(self.tasks)
        state = ExecutionState(results, [np.random.default_rng(child) for child in children])
        return results, TaskGraph(self._topological_sorter, self._static_order), state

    def _collect(self, results: List[Any]) -> Dict[str, Any]:
        return {task.name: results[task.task_id] for task in self.tasks}

    def execute_sync(self, executor: SupportsSyncExecutor, seed: int) -> Dict[str, Any]:
        """Run every task and return the results by task name, in task id order."""
        results, graph, state = self._prepare_execution(seed)
        executor.execute_sync(graph, state)
        return self._collect(results)

    async def execute_async(self, executor: SupportsAsyncExecutor, seed: int) -> Dict[str, Any]:
        results, graph, state = self._prepare_execution(seed)
        await executor.execute_async(graph, state)
        return self._collect(results)


class Pipeline:
    """Named experiment steps and the steps each one consumes.

    A task is called as `call(rng, *dependency_results)`. Tasks marked `emits` produce output
    rows; the others only feed later steps.
    """

    __slots__ = ("_calls",)

    def __init__(self) -> None:
        self._calls: Dict[str, Tuple[TaskCallable, Tuple[str, ...], bool]] = {}

    def __len__(self) -> int:
        return len(self._calls)

    def __contains__(self, name: object) -> bool:
        return name in self._calls

    def add(
        self,
        name: str,
        call: TaskCallable,
        *,
        depends_on: Sequence[str] = (),
        emits: bool = False,
    ) -> None:
        if name in self._calls:
            raise ValueError(f"Task {name!r} is already defined")
        self._calls[name] = (call, tuple(depends_on), emits)

    def _build(self, name: str, tasks: Dict[str, Task], path: Dict[str, None]) -> Task:
        if name in tasks:
            return tasks[name]
        if name in path:
            cycle = [*path, name]
            raise DependencyCycleError(
                "Tasks are in a cycle: " + " -> ".join(cycle[cycle.index(name) :]), cycle
            )
        call, depends_on, emits = self._calls[name]
        for dep in depends_on:
            if dep not in self._calls:
                raise ValueError(f"Task {name!r} depends on the unknown task {dep!r}")
        # a dict keeps the path ordered with O(1) membership checks
        path[name] = None
        dependencies = [self._build(dep, tasks, path) for dep in depends_on]
        path.pop(name)
        task_id = list(self._calls).index(name)
        tasks[name] = Task(task_id, name, call, dependencies, emits)
        return tasks[name]

    def solve(self) -> SolvedPipeline:
        """Check the dependencies and fix an execution order."""
        tasks: Dict[str, Task] = {}
        for name in self._calls:
            self._build(name, tasks, {})
        ordered = tuple(sorted(tasks.values(), key=lambda task: task.task_id))
        ts = TopologicalSorter({task: list(task.dependencies) for task in ordered})
        static_order = tuple(ts.copy().static_order())
        ts.prepare()
        return SolvedPipeline(ordered, ts, static_order)
