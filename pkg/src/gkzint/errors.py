"""Exception hierarchy shared by all modules, with stable CLI exit codes."""


class GkzError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class MalformedInputError(GkzError):
    """Input violates a structural precondition (zero denominator, bad JSON, ...)."""

    exit_code = 2


class ParameterError(GkzError):
    """Parameter vector is resonant / not very generic for the requested task."""

    exit_code = 3


class ResourceLimitError(GkzError):
    """A configured search or step limit was exhausted before success."""

    exit_code = 4


class NotABasisError(GkzError):
    """The proposed cohomology classes are not a basis (singular coefficient matrix)."""

    exit_code = 5


class NormalizationError(GkzError):
    """No usable entry/point found to pin the intersection-matrix scalar."""

    exit_code = 6


class DegenerateWeightError(GkzError):
    """Weight vector lies on a wall of the secondary fan (non-simplicial cell)."""

    exit_code = 7


class DegenerateDecompositionError(GkzError):
    """Chosen lattice decomposition makes a contiguity prefactor vanish identically."""

    exit_code = 8


class InconsistencyError(GkzError):
    """An internal certificate failed (e.g. rational solution space dimension != 1)."""

    exit_code = 9


class NonConvergenceError(GkzError):
    """Series evaluation point is outside the usable part of the convergence region."""

    exit_code = 10
