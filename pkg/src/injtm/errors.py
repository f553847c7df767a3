"""Exception types shared across the toolkit."""


class InjtmError(Exception):
    """Base class for every error raised by this package."""


class MalformedProgram(InjtmError, ValueError):
    """Machine text or program bits that do not describe a machine."""


class DeterminismFirst(InjtmError):
    pass


class NotDeterministic(InjtmError):
    pass


class OracleMissing(InjtmError):
    pass


class IllegalRubberOp(InjtmError):
    pass


class NotAPair(InjtmError, ValueError):
    pass


class InvalidProgram(InjtmError):
    pass


class BoundTooLarge(InjtmError):
    pass


class NotInDomain(InjtmError):
    pass


class NotInImage(InjtmError):
    pass


class NotInverses(InjtmError):
    pass


class NotInjective(InjtmError):
    pass


class NotMutual(InjtmError):
    pass


class DomainMismatch(InjtmError):
    pass


class CapExceeded(InjtmError):
    pass


class UnknownOracle(InjtmError, KeyError):
    pass
