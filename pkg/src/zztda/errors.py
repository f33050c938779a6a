"""Exception types shared across the package."""


class ZZTError(Exception):
    """Base class for all zztda errors."""


class StackFormatError(ZZTError):
    """An on-disk layer stack is malformed (manifest, payload files, or sizes)."""


class StackValidationError(ZZTError):
    """In-memory layer-stack contents violate a structural invariant."""


class SimplexBudgetError(ZZTError):
    """Clique expansion exceeded the configured simplex budget."""


class FiltrationOrderError(ZZTError):
    """Insert/delete events violate face ordering or state consistency."""


class CalibrationError(ZZTError):
    """No filter radius attains the requested component-count range.

    Attributes
    ----------
    target, tolerance : the requested component-count window.
    achievable : (below, above) component counts bracketing the window;
        either side is None when the window is not bracketed on that side.
    """

    def __init__(self, message, target, tolerance, achievable):
        super().__init__(message)
        self.target = target
        self.tolerance = tolerance
        self.achievable = achievable
