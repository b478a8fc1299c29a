import os

from nlpot.exceptions import ConfigError, SizeLimitError

VERTEX_BUDGET_ENV = "NLPOT_VERTEX_BUDGET"
DEFAULT_VERTEX_BUDGET = 4_000_000


def vertex_budget() -> int:
    """Current vertex budget, read from the environment on every call."""
    raw = os.environ.get(VERTEX_BUDGET_ENV)
    if raw is None:
        return DEFAULT_VERTEX_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise ConfigError(
            f"{VERTEX_BUDGET_ENV} must be an integer, got {raw!r}"
        ) from None
    if budget < 1:
        raise ConfigError(f"{VERTEX_BUDGET_ENV} must be positive, got {budget}")
    return budget


def check_vertex_budget(requested: int, what: str) -> None:
    budget = vertex_budget()
    if requested > budget:
        raise SizeLimitError(
            f"{what} needs {requested} vertices but the budget is {budget}"
            f" (override with {VERTEX_BUDGET_ENV})",
            requested=requested,
            budget=budget,
        )
