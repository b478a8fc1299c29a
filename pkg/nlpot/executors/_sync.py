from nlpot.api.executor import SupportsSyncExecutor, SupportsTaskGraph
from nlpot._task import ExecutionState


class SyncExecutor(SupportsSyncExecutor):
    """Runs tasks one after another in the pipeline's static topological order."""

    def execute_sync(self, tasks: SupportsTaskGraph, state: ExecutionState) -> None:
        for task in tasks.static_order():
            task.compute(state)
