"""Exception hierarchy shared by all zerosum modules."""


class ZeroSumError(Exception):
    """Base class for every error raised by this package."""


class InconsistentPresentation(ZeroSumError):
    pass


class CapExceeded(ZeroSumError):
    pass


class NotPGroup(ZeroSumError):
    pass


class NotAbelian(ZeroSumError):
    pass


class EmptySequence(ZeroSumError):
    pass


class BadLength(ZeroSumError):
    pass


class SearchExhausted(ZeroSumError):
    """A search that a cited lemma guarantees to succeed came back empty."""


class BadFactors(ZeroSumError):
    pass


class BadParameters(ZeroSumError):
    pass


class WrongFamily(ZeroSumError):
    pass


class PreconditionFailed(ZeroSumError):
    pass


class ParseError(ZeroSumError):
    def __init__(self, text: str, pos: int, reason: str):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"{reason} at position {pos} in {text!r}")
