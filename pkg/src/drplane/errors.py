"""Error types shared across the package.

Everything derives from ValueError so callers (and the CLI) can treat any of
them as "bad input / unusable request" without special-casing.
"""


class BackendError(ValueError):
    """An operation mixed numeric backends, or asked one for an answer it
    cannot give (e.g. deciding rationality of a float)."""


class DimensionMismatch(ValueError):
    """Vectors of different lengths were combined."""


class PreconditionError(ValueError):
    """A stated hypothesis of the requested formula or check does not hold."""


class ProblemFormatError(ValueError):
    """A problem description (JSON or dict) could not be parsed or validated."""
