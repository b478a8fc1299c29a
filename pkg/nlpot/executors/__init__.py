from typing import TYPE_CHECKING, Any

from nlpot.executors._sync import SyncExecutor

if TYPE_CHECKING:
    from nlpot.executors._concurrent import ConcurrentExecutor

__all__ = ("ConcurrentExecutor", "SyncExecutor")


def __getattr__(name: str) -> Any:
    # anyio is an optional extra: the concurrent executor is imported on first access
    if name == "ConcurrentExecutor":
        from nlpot.executors._concurrent import ConcurrentExecutor

        return ConcurrentExecutor
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
