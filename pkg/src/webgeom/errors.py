"""Exception types shared across the package."""


class MathRefusal(ValueError):
    """The input is well formed but the requested computation does not apply to it
    (web not smooth at the base point, root not simple, unsupported data...)."""


class NotClosedError(MathRefusal):
    pass
