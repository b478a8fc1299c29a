from __future__ import annotations

try:
    import anyio
except ImportError as e:
    raise ImportError(
        "Using ConcurrentExecutor requires installing anyio"
        " (`pip install anyio`) or the anyio extra (`pip install nlpot[anyio]`)"
    ) from e
import anyio.abc

from nlpot.api.executor import SupportsAsyncExecutor, SupportsTaskGraph
from nlpot._task import ExecutionState, Task


async def thread_worker(
    task: Task,
    tasks: SupportsTaskGraph,
    state: ExecutionState,
    taskgroup: anyio.abc.TaskGroup,
    limiter: anyio.CapacityLimiter,
) -> None:
    await anyio.to_thread.run_sync(task.compute, state, limiter=limiter)
    tasks.done(task)
    for ready in tasks.get_ready():
        taskgroup.start_soon(thread_worker, ready, tasks, state, taskgroup, limiter)


class ConcurrentExecutor(SupportsAsyncExecutor):
    """Runs every ready task in a worker thread, at most `jobs` at a time.

    Tasks write their results into their own slot, so the outcome does not depend on which
    task finishes first.
    """

    def __init__(self, jobs: int = 4) -> None:
        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        self.jobs = jobs

    async def execute_async(self, tasks: SupportsTaskGraph, state: ExecutionState) -> None:
        limiter = anyio.CapacityLimiter(self.jobs)
        async with anyio.create_task_group() as taskgroup:
            for task in tasks.get_ready():
                taskgroup.start_soon(thread_worker, task, tasks, state, taskgroup, limiter)
