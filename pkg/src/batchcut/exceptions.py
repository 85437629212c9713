"""Exception types raised across the toolkit."""


class DatasetFormatError(ValueError):
    """Malformed dataset or lexicon input (message includes the offending line)."""


class InstanceTooLargeError(ValueError):
    """Exhaustive search refused because the partition count exceeds the guard."""


class EigenConvergenceError(RuntimeError):
    """Iterative eigensolver hit its iteration cap; message reports the achieved residual."""


class UndefinedCorrelationError(ValueError):
    """Correlation requested on a trace that is too short or has a constant series."""
