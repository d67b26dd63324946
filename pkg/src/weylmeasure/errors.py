"""Exception hierarchy shared by all modules."""


class WeylMeasureError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(WeylMeasureError, ValueError):
    """Operands live in phase spaces of different dimension."""


class ConfigError(WeylMeasureError, ValueError):
    """Invalid measure file, experiment configuration or parameter."""


class NumericalError(WeylMeasureError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy value."""


class QuadratureError(NumericalError):
    """Quadrature did not converge or hit an invalid node."""


class RankDeficientError(QuadratureError):
    """A chart fails to be an immersion at a quadrature node."""


class BudgetExceededError(NumericalError):
    """A direct multi-fold quadrature would exceed the configured cost budget."""


class NearCriticalError(NumericalError):
    """A density query hit a fiber point where the sum map is (nearly) critical."""

    def __init__(self, message, root=None, jacobian=None):
        super().__init__(message)
        self.root = root
        self.jacobian = jacobian
