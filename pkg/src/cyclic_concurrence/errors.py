"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A numerical input failed a validity check (Hermiticity, PSD, norm)."""


class XFormError(ValidationError):
    """A two-qubit matrix has non-negligible entries outside the X pattern."""

    def __init__(self, message, index=None, magnitude=None):
        super().__init__(message)
        self.index = index
        self.magnitude = magnitude
