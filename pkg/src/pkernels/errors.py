"""Package-wide exception types."""


class ConventionError(RuntimeError):
    """An internal consistency check tied to a sign/orientation convention
    failed.  This never indicates bad user input: it means two parts of the
    library disagree about a convention and the result cannot be trusted."""


class ResourceLimitError(RuntimeError):
    """A configured resource bound (height, support size, wall time) was hit."""
