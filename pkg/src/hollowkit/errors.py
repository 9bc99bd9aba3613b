"""Exception types shared across the package.

Every structured failure mode raised by hollowkit derives from
:class:`HollowkitError` so callers (and the CLI) can catch one base class.
Exceptions that carry diagnostic payloads expose them as attributes.
"""


class HollowkitError(Exception):
    """Base class for all hollowkit errors."""


class DegenerateConfigurationError(HollowkitError):
    """A point configuration is too degenerate for the requested operation."""


class DegenerateSimplexError(HollowkitError):
    """Simplex vertices are affinely dependent beyond the degeneracy gate."""


class UnboundedBodyError(HollowkitError):
    """An H-polytope description admits a recession direction."""


class EmptyBodyError(HollowkitError):
    """A body description has no feasible point."""


class ProjectionError(HollowkitError):
    """Iterative projection did not converge.

    Attributes
    ----------
    last_iterate : ndarray
        The final iterate when the round budget ran out.
    residual : float
        Distance from the final iterate to the farthest member set.
    """

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class ConvergenceError(HollowkitError):
    """An iterative solve exhausted its budget; carries the best result."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ToleranceAmbiguityError(HollowkitError):
    """A feasibility gap landed inside the indeterminate band [tol/10, tol]."""

    def __init__(self, message, gap=None, tol=None):
        super().__init__(message)
        self.gap = gap
        self.tol = tol


class NotSeparableError(HollowkitError):
    """Bodies overlap (or nearly so); no separating hyperplane exists."""


class NoHollowError(HollowkitError):
    """The family cannot enclose a hollow in this ambient dimension (n < d)."""


class BorderlineCriticalError(HollowkitError):
    """Criticality margins sit too close to the tolerance floor to certify."""


class SpernerLegalityError(HollowkitError):
    """A coloring violated the carrier-face rule; internal inconsistency."""


class SubdivisionSizeError(HollowkitError):
    """Requested subdivision depth exceeds the cell budget."""


class KleeSolveError(HollowkitError):
    """No common point found within the subdivision budget.

    Attributes
    ----------
    best_cell : ndarray or None
        Vertex coordinates of the smallest rainbow cell seen, if any.
    """

    def __init__(self, message, best_cell=None):
        super().__init__(message)
        self.best_cell = best_cell


class GridResolutionError(HollowkitError):
    """Grid resolution too coarse for the region being rasterized."""


class HollowNotFoundError(HollowkitError):
    """No bounded uncovered component appeared where one was expected."""


class SceneError(HollowkitError):
    """A scene or result file failed to parse or validate.

    ``line`` and ``column`` are set for JSON syntax errors; ``details`` holds
    per-body validation messages.
    """

    def __init__(self, message, line=None, column=None, details=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.details = details or []
