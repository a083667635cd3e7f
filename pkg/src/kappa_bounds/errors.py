"""Exception hierarchy shared across the package."""


class KappaBoundsError(Exception):
    """Base class for every error raised by kappa_bounds."""


class DomainError(KappaBoundsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundNotApplicable(KappaBoundsError, ValueError):
    """A conditional inequality was queried outside its hypotheses.

    Distinct from a bound being false: the inequality simply makes no claim
    for these arguments.
    """


class AccuracyError(KappaBoundsError, ArithmeticError):
    """A numerical result could not be certified to the required accuracy."""


class SVDConvergenceError(KappaBoundsError, ArithmeticError):
    """The singular value routine failed to converge."""


class VacuousConfigError(KappaBoundsError, ValueError):
    """A Monte Carlo configuration cannot resolve the requested tail."""
