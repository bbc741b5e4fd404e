"""Exception hierarchy. The CLI maps these onto exit codes."""


class CoxArithError(Exception):
    """Base class for every error raised by the package."""


class AlgebraError(CoxArithError, ArithmeticError):
    """Division by zero, square root of a negative number, zero polynomial."""


class DiagramError(CoxArithError, ValueError):
    """Malformed Coxeter diagram or diagram text."""


class InvalidSpecError(CoxArithError, ValueError):
    """Prism parameters violate the family's constraints."""


class SolveError(CoxArithError):
    """The base-distance quadratic has no admissible root."""


class GlueError(CoxArithError, ValueError):
    """Two prisms cannot be glued along a common base."""


class InternalCheckError(CoxArithError):
    """A built-in cross-check failed; the result cannot be trusted."""


class NotInFieldError(AlgebraError):
    """A number was expected in a field it does not belong to."""
