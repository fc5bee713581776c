class NestcondError(Exception):
    """Base class for all errors raised by this package."""


class ContainerMismatchError(NestcondError):
    pass


class MorphismError(NestcondError):
    """A morphism was used where its domain/codomain or injectivity does not fit."""


class ConditionError(NestcondError):
    pass


class ParseError(NestcondError):
    """Raised when a serialized document cannot be read back."""
