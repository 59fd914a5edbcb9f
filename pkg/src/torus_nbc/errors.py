"""Exception and warning types shared across the package."""


class MeshParseError(ValueError):
    """Raised when a mesh literal such as ``3x4x5`` cannot be parsed.

    The ``position`` attribute holds the character offset of the first
    offending character in the input string.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DimensionTooSmallError(ValueError):
    """A mesh dimension was below the minimum of 2."""


class AxisOutOfRangeError(IndexError):
    """An axis argument was outside 1..n (axes are 1-based in the API)."""


class InvalidVertexError(ValueError):
    """A vertex did not belong to the mesh under consideration."""


class NotAdjacentLayerError(ValueError):
    """A layer index did not name a layer adjacent to the given vertex."""


# Same condition, raised by the layer-pair operations.
LayersNotAdjacentError = NotAdjacentLayerError


class SameVertexError(ValueError):
    """Two distinct vertices were required but the same one was given twice."""


class VertexDeadError(ValueError):
    """An operation required an alive vertex but got a removed one."""


class EmptyTargetSetError(ValueError):
    """A fan construction was asked for with no target vertices."""


class UnsupportedMeshError(ValueError):
    """The requested construction is not defined for this mesh's dimensions."""


class PreconditionViolatedError(ValueError):
    """Structural preconditions of an analysis routine were not met."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search hit its subset budget before resolving.

    ``examined`` counts fully scanned subsets; ``next_size`` is the fault
    set size whose enumeration would have blown the budget.
    """

    def __init__(self, message: str, examined: int, next_size: int):
        super().__init__(message)
        self.examined = examined
        self.next_size = next_size


class TheoremOutOfScopeWarning(UserWarning):
    """Emitted when a mesh falls outside the range where the closed-form
    connectivity statements are known to hold (some dimension below 3)."""
