"""Exception hierarchy. The class name doubles as the error tag reported by the CLI."""


class PLError(Exception):
    """Base class for all library errors."""

    @property
    def name(self):
        return type(self).__name__


class ValidationError(PLError):
    """Malformed input data (maps the CLI to exit code 2)."""


class ConstructionError(PLError):
    """A constructor could not realize the requested object (CLI exit code 3)."""


class LengthMismatch(ValidationError):
    pass


class Unsorted(ValidationError):
    pass


class NonPositiveSlope(ValidationError):
    pass


class CircumferenceMismatch(ValidationError):
    pass


class DuplicatePoints(ValidationError):
    pass


class JumpProductNotOne(ValidationError):
    pass


class MixedDenominators(ValidationError):
    pass


class ParameterOutOfRange(ValidationError):
    pass


class SlopesOnSameSideOfOne(ValidationError):
    pass


class NonIntegerCircumference(ValidationError):
    pass


class NotMAdic(ValidationError):
    pass


class NotBoshernitzanForm(ValidationError):
    pass


class DNotSatisfied(ConstructionError):
    pass


class NormalFormFailure(ConstructionError):
    pass


class RankUnavailable(ConstructionError):
    pass


class FactorizationFailure(ConstructionError):
    pass


class NotRealizable(ConstructionError):
    pass
