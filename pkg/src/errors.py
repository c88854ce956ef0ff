"""
Errors shared by every layer.

Library code raises these; only the command-line front end turns them into
exit codes.
"""


class SumProtocolError(ValueError):
    pass


class ZeroInverseError(SumProtocolError):
    pass


class OutOfRangeError(SumProtocolError):
    pass


class LengthMismatchError(SumProtocolError):
    pass


class BadDifferenceError(SumProtocolError):
    pass


class MixedParametersError(SumProtocolError):
    pass


class EmptySetError(SumProtocolError):
    pass


class TrivialRegimeError(SumProtocolError):
    """Parameters fall outside the D-AP regime; callers use the trivial protocol."""


class EqualTargetsError(SumProtocolError):
    pass


class ArityMismatchError(SumProtocolError):
    pass


class PromiseViolationError(SumProtocolError):
    pass


class OnPromiseError(SumProtocolError):
    """Raised when an error profile is requested for inputs that hit the target."""


class NotSquareFreeError(SumProtocolError):
    pass


class DegenerateTargetsError(SumProtocolError):
    pass


class TranscriptFormatError(SumProtocolError):
    pass


class ConfigError(SumProtocolError):
    pass
