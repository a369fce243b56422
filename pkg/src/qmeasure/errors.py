"""Exception hierarchy shared by every module of the package."""


class QMeasureError(Exception):
    """Base class for all errors raised by qmeasure."""


class InputError(QMeasureError, ValueError):
    """Malformed argument: bad qubit index, length mismatch, non-unitary matrix."""


class DegenerateBranchError(QMeasureError, ArithmeticError):
    """Raised when normalizing a branch whose norm is effectively zero."""


class CircuitError(InputError):
    """A circuit violates a structural invariant (labels, ranges, conditions)."""


class CircuitFormatError(InputError):
    """A circuit or state file could not be parsed."""


class ResourceLimitError(QMeasureError):
    """Requested work exceeds a hard size limit (qubits, measurements)."""


class ComparisonError(QMeasureError):
    """Two branch distributions cannot be compared as requested."""


class RewriteUnsupportedError(QMeasureError):
    """A rewrite pass cannot be applied to the given circuit or site."""


class CertificationError(QMeasureError):
    """A rewrite produced a circuit that the oracle says is not equivalent."""
