"""Exception hierarchy shared by all modules."""


class CapacityError(ValueError):
    """Base class for domain errors raised by this package."""


class ChannelError(CapacityError):
    pass


class EvenCoalition(ChannelError):
    pass


class BadRate(ChannelError):
    pass


class BadThreshold(ChannelError):
    pass


class BadProbability(ChannelError):
    pass


class ChannelSpecError(ChannelError):
    """A channel spec string could not be parsed; ``token`` is the offending part."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class DomainError(CapacityError):
    pass


class MarkingRequired(CapacityError):
    pass


class Unavailable(CapacityError):
    """No closed-form prediction exists for the requested model/decoder pair."""


class DegenerateCapacity(CapacityError):
    pass
