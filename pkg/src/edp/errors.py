"""Exception types shared across the package."""


class EDPError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(EDPError, ValueError):
    """An argument lies outside the region where a quantity is defined."""


class PoleError(EDPError, ArithmeticError):
    """A denominator vanishes (series pole, spectrum pole)."""


class ComplexRootError(EDPError, ArithmeticError):
    """A closed form would require the square root of a negative number."""


class ConvergenceError(EDPError, RuntimeError):
    """An iterative procedure ran out of iterations or terms."""


class ContinuationError(ConvergenceError):
    """Homotopy continuation lost its bracket along the path."""


class QuantumNumberError(EDPError, ValueError):
    """Quantum numbers do not describe an admissible state."""


class SplitError(EDPError, ArithmeticError):
    """v(u) - gR could not be separated into V(u) - E with a constant E."""
