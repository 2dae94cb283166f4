"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Rejected input: malformed graph, inadmissible radius, missing data."""


class NumericalError(RuntimeError):
    """A solve or internally guaranteed invariant failed beyond tolerance."""
