from nlpot.api.executor import SupportsAsyncExecutor, SupportsSyncExecutor, SupportsTaskGraph

__all__ = (
    "SupportsAsyncExecutor",
    "SupportsSyncExecutor",
    "SupportsTaskGraph",
)
