"""Exception hierarchy shared across the package."""


class GradualPrivacyError(Exception):
    """Base class for all package errors."""


class LevelOrderError(GradualPrivacyError, ValueError):
    """Privacy levels were supplied in the wrong order."""


class BridgeUnsupported(GradualPrivacyError):
    """A query fell strictly between two levels already stored on a chain.

    No conditional law given both neighbours is available, so the chain
    refuses rather than sampling from a guessed kernel.
    """

    def __init__(self, eps, lower, upper):
        self.eps = eps
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"level {eps!r} lies strictly between stored levels "
            f"{lower!r} and {upper!r}; bridge sampling is not supported"
        )


class ChainFormatError(GradualPrivacyError, ValueError):
    """A persisted chain or mechanism record could not be parsed."""


class InsufficientSamplesError(GradualPrivacyError, ValueError):
    """An audit was handed fewer observations than its floor."""
