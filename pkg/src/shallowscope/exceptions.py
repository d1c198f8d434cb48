"""Exception hierarchy for shallowscope.

Every error also derives from the builtin a caller would naturally catch
(``ValueError`` for bad inputs, ``RuntimeError`` for data or numerical
failures), so code that only knows the builtins keeps working.
"""


class ShallowScopeError(Exception):
    """Base class for all shallowscope errors."""


class ConfigError(ShallowScopeError, ValueError):
    """Invalid experiment configuration.

    Attributes:
        field: Name of the offending configuration field
    """

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class DimensionError(ShallowScopeError, ValueError):
    """Qubit count or matrix shape mismatch, or a register that is too large."""


class InvalidStateError(ShallowScopeError, ValueError):
    """A state or operator violates its type invariants."""


class CircuitError(ShallowScopeError, ValueError):
    """Invalid circuit, or a circuit that cannot be embedded in its geometry."""


class UnsupportedRangeError(ShallowScopeError, ValueError):
    """Parameter outside the range an exact computation supports."""


class BudgetExceededError(ShallowScopeError, ValueError):
    """A measurement schedule exceeds the configured shot budget."""


class ScheduleMismatchError(ShallowScopeError, ValueError):
    """Records do not have the structure of the schedule they claim to follow."""


class FileFormatError(ShallowScopeError, ValueError):
    """Malformed shot, circuit, state, estimate or Hamiltonian file."""


class InsufficientDataError(ShallowScopeError, RuntimeError):
    """Not enough measurement data to form an estimate."""


class NotUniqueGroundStateError(ShallowScopeError, RuntimeError):
    """The supplied state is not the unique ground state of the Hamiltonian."""
