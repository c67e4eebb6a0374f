"""Exception types raised by rgsched."""


class RGSchedError(Exception):
    """Base class for all library errors."""


class InvalidDistribution(RGSchedError, ValueError):
    pass


class ConditionOnZeroEvent(RGSchedError, ValueError):
    """Conditioning on an event of probability zero."""


class InvalidAlpha(RGSchedError, ValueError):
    pass


class NotCloseForAnyAlpha(RGSchedError):
    pass


class UnsupportedPair(RGSchedError, ValueError):
    pass


class ShiftOutOfRange(RGSchedError, ValueError):
    pass


class MassNotNormalized(RGSchedError, ValueError):
    pass


class GenerationFailed(RGSchedError):
    pass


class OrderInversion(RGSchedError):
    """A job's quanta would run out of offset order (rank computation bug)."""


class IncompleteSchedule(RGSchedError):
    """A schedule ran out of entries before every job finished."""


class ScheduleDoesNotCover(RGSchedError, ValueError):
    pass


class StateSpaceTooLarge(RGSchedError):
    pass


class InvalidParams(RGSchedError, ValueError):
    pass
