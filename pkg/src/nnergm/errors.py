"""Exception types shared across the toolkit."""


class NnergmError(Exception):
    """Base class for all toolkit errors."""


class GraphFormatError(NnergmError, ValueError):
    """An edge-list file or stream could not be parsed."""


class SpecError(NnergmError, ValueError):
    """A model specification is invalid or does not match its inputs."""


class SamplerError(NnergmError, RuntimeError):
    """A simulation run violated one of its internal checks."""


class EnumerationError(NnergmError, ValueError):
    """Exact enumeration was requested beyond the tractable bound."""


class EstimationError(NnergmError, RuntimeError):
    """An estimator failed in a way that has no meaningful result."""


class DegeneracyError(EstimationError):
    """Simulation got pinned in a degenerate (near-empty/near-complete) region."""


class CollinearityError(EstimationError):
    """A statistic covariance matrix is singular; names the collinear terms."""


class TrainingDivergedError(NnergmError, RuntimeError):
    """Surrogate training produced a non-finite loss."""
