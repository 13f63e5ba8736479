"""Exception hierarchy.

Validation problems (bad input, bad config) derive from ``ValidationError``;
failures of a numerical procedure derive from ``NumericalError``.  The CLI
maps the two families onto exit codes 1 and 2.
"""


class ExcitonMemError(Exception):
    pass


class ValidationError(ExcitonMemError, ValueError):
    pass


class NumericalError(ExcitonMemError, ArithmeticError):
    pass


class SingularConfigurationError(NumericalError):
    """A closed-form expression hit a vanishing denominator."""


class RootFindingError(NumericalError):
    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class ModelViolationError(NumericalError):
    """A computed quantity broke a model assumption (e.g. a pole with Im s <= 0)."""


class PoleError(NumericalError):
    """Evaluation exactly on a resonance energy."""


class SingularDispersionError(NumericalError):
    """The two dispersion branches collide (sqrt((k-k1)(k-k2)) ~ 0)."""


class BranchDiscontinuityError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class GridResolutionError(NumericalError):
    pass
