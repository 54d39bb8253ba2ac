"""Exception types shared across the package."""


class VortexHopError(Exception):
    """Base class for all package errors."""


class DomainError(VortexHopError, ValueError):
    """An argument lies outside the domain an operation supports."""


class PreconditionError(VortexHopError, ValueError):
    """Inputs are individually valid but violate a structural precondition."""


class EnumerationLimitError(VortexHopError):
    """An exhaustive enumeration would exceed the configured size guard."""


class NumericalDiagnostic(VortexHopError, ArithmeticError):
    """A closed form would be evaluated outside its valid numerical window."""


class ConfigError(VortexHopError, ValueError):
    """Invalid experiment or Monte Carlo configuration.

    ``field`` carries a dotted path such as ``system.m`` so CLI users can
    find the offending entry.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
