from __future__ import annotations

from typing import Any, Sequence


class NlpotException(Exception):
    """Base exception for this library"""

    pass


class ConfigError(NlpotException, ValueError):
    """Raised when a configuration object is constructed with invalid values"""


class SizeLimitError(NlpotException):
    """Raised when a generator would exceed the configured vertex budget"""

    def __init__(self, msg: str, requested: int, budget: int) -> None:
        super().__init__(msg)
        self.requested = requested
        self.budget = budget


class FormatError(NlpotException, ValueError):
    """Raised when a text file (graph, vertex function, packing) cannot be parsed"""


# graph-core


class GraphError(NlpotException, ValueError):
    """Raised when an edge list does not describe a valid graph"""


class LoopEdgeError(GraphError):
    """Raised when an edge joins a vertex to itself"""


class DuplicateEdgeError(GraphError):
    """Raised when the same unordered pair appears twice"""


class DisconnectedError(GraphError):
    """Raised when the graph is not connected"""


class InvalidPathError(NlpotException, ValueError):
    """Raised when a vertex sequence is not a path of the host graph"""


# generators


class NotAProductError(NlpotException, ValueError):
    """Raised when a Z-shift is requested on a graph that is not (something) x path"""


class NotHyperbolicError(NlpotException, ValueError):
    """Raised when a {p,q} tessellation is requested with (p-2)(q-2) <= 4"""


# potential


class NoInteriorWarning(UserWarning):
    """Issued when a Dirichlet problem has no interior vertex; the boundary data is returned"""


class MaxSweepsExceededError(NlpotException):
    """Raised when a Dirichlet solve runs out of sweeps.

    The best iterate and the residual it achieved are kept on the exception.
    """

    def __init__(self, msg: str, residual: float, solution: Any) -> None:
        super().__init__(msg)
        self.residual = residual
        self.solution = solution


# capmod


class OverlapError(NlpotException, ValueError):
    """Raised when the two plates of a capacitor or connector intersect"""


class NoPathError(NlpotException):
    """Raised when no path joins the source and target sets"""


class EmptyTargetError(NlpotException):
    """Raised when a boundary proxy scale captures no vertex"""

    def __init__(self, msg: str, scale: float) -> None:
        super().__init__(msg)
        self.scale = scale


class TooLargeError(NlpotException):
    """Raised when exact enumeration is requested on a graph that is too large"""


class ZeroGradientError(NlpotException, ValueError):
    """Raised when a nonzero function has zero gradient everywhere"""


# packing


class GraphMismatchError(NlpotException, ValueError):
    """Raised when a graph is not the contact graph of the given packing"""


class BadRadiiError(NlpotException, ValueError):
    """Raised when blocking radii are missing their separation certificates"""


class PathMismatchError(NlpotException, ValueError):
    """Raised when a divergence path does not end at the vertex nearest the anchor"""


# circlepack


class NotTriangulationError(NlpotException, ValueError):
    """Raised when a triangulated disk fails its combinatorial checks"""


class NoConvergenceError(NlpotException):
    """Raised when the radius iteration does not reach the angle tolerance.

    The best packing found and its angle residual are kept on the exception.
    """

    def __init__(self, msg: str, residual: float, result: Any) -> None:
        super().__init__(msg)
        self.residual = residual
        self.result = result


# experiments


class SpecError(NlpotException, ValueError):
    """Raised when an experiment spec cannot be parsed or references unknown recipes"""


class DependencyCycleError(NlpotException):
    """Raised when experiment tasks depend on each other in a cycle"""

    def __init__(self, msg: str, path: Sequence[Any]) -> None:
        super().__init__(msg)
        self.path = list(path)
