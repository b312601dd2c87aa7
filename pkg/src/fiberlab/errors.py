"""Exception types shared across the library."""


class KraftInfeasibleError(ValueError):
    """Requested codeword lengths violate Kraft's inequality."""


class ModelMismatchError(ValueError):
    """Observed data has zero probability under the declared model."""


class MalformedStreamError(ValueError):
    """A bit stream cannot be parsed back into source blocks."""


class ResourceLimitError(RuntimeError):
    """An exhaustive computation would exceed the configured cap."""


class InfiniteInformationError(ValueError):
    """Information content of a zero-probability event was requested."""
