from __future__ import annotations

from typing import Any, Callable, List, Sequence

import numpy as np

# a task receives its own generator followed by the results of its dependencies
TaskCallable = Callable[..., Any]


class ExecutionState:
    __slots__ = ("results", "rngs")

    def __init__(self, results: List[Any], rngs: Sequence[np.random.Generator]) -> None:
        self.results = results
        self.rngs = rngs


class Task:
    __slots__ = ("task_id", "name", "call", "dependencies", "emits")

    def __init__(
        self,
        task_id: int,
        name: str,
        call: TaskCallable,
        dependencies: Sequence[Task],
        emits: bool,
    ) -> None:
        self.task_id = task_id
        self.name = name
        self.call = call
        self.dependencies = tuple(dependencies)
        self.emits = emits

    def __hash__(self) -> int:
        return self.task_id

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(task_id={self.task_id}, name={self.name!r})"

    def compute(self, state: ExecutionState) -> None:
        args = [state.results[dep.task_id] for dep in self.dependencies]
        state.results[self.task_id] = self.call(state.rngs[self.task_id], *args)
