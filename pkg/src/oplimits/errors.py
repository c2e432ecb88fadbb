class NotDivisibleError(ValueError):
    """A tuple has no factorization with an inner factor of the requested length."""


class NotAlternationError(ValueError):
    """A presentation contains a tuple whose entries are not all equal."""


class NotGapPointError(ValueError):
    pass


class SizeLimitError(ValueError):
    """A finite level would be materialized beyond the configured cap."""


class InternalInvariantError(RuntimeError):
    """A consistency check guaranteed by the theory failed.

    Raised instead of returning a possibly wrong answer; the CLI maps it to
    exit code 2.
    """
