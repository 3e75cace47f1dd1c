"""Exception types raised across the package."""


class LSMWordError(Exception):
    pass


class ResourceLimitError(LSMWordError):
    """A word would exceed the configured materialization cap."""

    def __init__(self, requested, cap):
        super().__init__(f"requested {requested} letters, cap is {cap}")
        self.requested = requested
        self.cap = cap


class NotAnImage(LSMWordError, ValueError):
    pass


class NotPresent(LSMWordError, ValueError):
    pass


class Inconsistent(LSMWordError, ValueError):
    pass


class FrameViolation(LSMWordError):
    def __init__(self, message, outside=()):
        super().__init__(message)
        self.outside = tuple(outside)


class FormulaInvalid(LSMWordError):
    """A witness formula produced words that fail validation.

    The offending words are kept on the exception so callers can still
    report them.
    """

    def __init__(self, message, v=None, w=None):
        super().__init__(message)
        self.v = v
        self.w = w


class MembershipUnresolved(LSMWordError):
    def __init__(self, message, word=None, bound=None):
        super().__init__(message)
        self.word = word
        self.bound = bound


class NotFound(LSMWordError):
    pass


class ConfigError(LSMWordError, ValueError):
    pass


class NotStabilizedWarning(UserWarning):
    """A window scan hit its doubling cap before the vector set settled."""
