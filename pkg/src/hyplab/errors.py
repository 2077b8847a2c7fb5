"""Exception hierarchy shared by every hyplab module."""


class HyplabError(Exception):
    """Base class for all library errors."""


class InvalidParam(HyplabError, ValueError):
    pass


class MismatchedAmbient(HyplabError, ValueError):
    pass


class NonIntegralGenus(HyplabError, ValueError):
    pass


class InvalidPoint(HyplabError, ValueError):
    pass


class PreconditionFailed(HyplabError):
    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or hypothesis)


class EmptyCollection(HyplabError, ValueError):
    pass


class FamilyNotApplicable(HyplabError, ValueError):
    pass


class NotHyperbolicInput(HyplabError, ValueError):
    pass


class UnderdeterminedSystem(HyplabError):
    pass


class InvariantViolation(HyplabError, AssertionError):
    """An internal consistency check failed; maps to CLI exit code 3."""
