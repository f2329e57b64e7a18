"""Exception and warning types shared across the package."""


class ResolutionError(Exception):
    """The grid cannot resolve the requested state or operation.

    Raised when a construction or transform would need samples the grid
    does not have: a requested width below the sample spacing, momentum
    content beyond the representable band, or probability mass escaping
    the grid (edges, corners under rotation).
    """


class ConfigError(Exception):
    """A run configuration is malformed or inconsistent."""


class EdgeMassWarning(UserWarning):
    """More probability mass than expected sits near the grid boundary."""


class NormalizationWarning(UserWarning):
    """A transform drifted the state norm beyond the allowed tolerance."""
