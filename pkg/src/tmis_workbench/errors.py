"""Exception hierarchy.

Every failure the protocol roles, attacks or harness can signal is a subclass
of :class:`WorkbenchError`, so callers can catch the family or a single case.
The class name doubles as the rejection reason recorded in reports.
"""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""

    @property
    def reason(self) -> str:
        return type(self).__name__


# algebra
class ParamsMismatch(WorkbenchError):
    pass


class MapFailure(WorkbenchError):
    pass


class DecodeError(WorkbenchError, ValueError):
    pass


class OffCurvePoint(WorkbenchError, ValueError):
    pass


# symmetric layer
class DecryptFailure(WorkbenchError):
    pass


# protocol
class EmptyIdentity(WorkbenchError, ValueError):
    pass


class CardRejected(WorkbenchError):
    pass


class StaleTimestamp(WorkbenchError):
    pass


class TimestampMismatch(WorkbenchError):
    pass


class PointCheckFailed(WorkbenchError):
    pass


class AuthMismatch(WorkbenchError):
    pass


# harness
class ConfigError(WorkbenchError, ValueError):
    pass


class SchemaVersionMismatch(WorkbenchError):
    pass
