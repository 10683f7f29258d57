"""Exception hierarchy shared by all modules."""


class SgrError(Exception):
    pass


class DomainError(SgrError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ContractError(SgrError, ValueError):
    """A documented precondition (e.g. minimum series order) is violated."""


class ResourceError(SgrError, RuntimeError):
    """A configured size cap would be exceeded."""


class MismatchError(SgrError):
    """Certificate and empirical estimate disagree."""

    def __init__(self, message, empirical=None, candidates=()):
        super().__init__(message)
        self.empirical = empirical
        self.candidates = tuple(candidates)


class PathError(SgrError):
    """Branch continuation passed too close to a critical point."""


class PrecisionError(SgrError):
    """Roots cannot be separated at the requested precision."""


class UnsupportedInputError(SgrError, ValueError):
    """Sequence shape not handled by a fitting routine (zeros, sign changes)."""
