"""Base exception for the package; concrete errors live next to their modules."""


class ReviewForgeError(Exception):
    """Root of all errors raised by reviewforge."""
