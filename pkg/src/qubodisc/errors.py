"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Array shapes or lengths do not agree."""


class SingularityError(ValueError):
    """A linear system has no unique solution."""


class PairingError(ValueError):
    """Variable pairs overlap, repeat a variable, or cannot be drawn."""
