"""Exception types shared across the library."""


class AlmostFullError(Exception):
    """Base class for library errors."""


class RegularityError(AlmostFullError):
    """A sequence term violated its certified bound (nonnegativity or decay)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CertificationError(AlmostFullError):
    """A finite certificate required by a construction could not be established."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BudgetExhausted(AlmostFullError):
    """A bounded search ran out of steps; raise the budget and retry."""

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed
