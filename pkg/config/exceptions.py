"""
Error hierarchy shared by every app.

The management command maps these onto exit codes: configuration problems
exit with 2, physics-domain problems with 3.
"""


class HfavgError(Exception):
    """Base class for all project errors"""


class ConfigurationError(HfavgError):
    """Invalid run configuration or input file"""


class SpeciesFileError(ConfigurationError):
    """Species file could not be parsed or failed validation"""


class SchemeFileError(ConfigurationError):
    """Scheme file could not be parsed or failed validation"""


class DomainError(HfavgError, ValueError):
    """Request is outside the physics domain of an operation"""


class QuantumNumberError(DomainError):
    """Negative, parity-mixed or out-of-range angular momentum quantum numbers"""


class PreconditionError(DomainError):
    """Theorem precondition (such as I >= J) not satisfied"""


class NoFieldIndependentPointError(DomainError):
    """No field-independent point exists on the requested interval"""


class DerivativeNoiseError(DomainError):
    """Finite-difference derivative stayed above its noise floor"""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
