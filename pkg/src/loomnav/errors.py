"""Exception hierarchy shared across the package."""


class LoomNavError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LoomNavError, ValueError):
    """Non-finite or out-of-domain argument."""


class DegenerateStateError(LoomNavError, ValueError):
    """Vehicle frame cannot be normalized."""


class LeaderNotInFrontError(LoomNavError, ValueError):
    """The leader is not ahead of the follower (r . x_f below threshold)."""


class BehindImagePlaneError(LoomNavError, ValueError):
    """Pinhole projection requested for a point behind the image plane."""


class TargetPassedError(LoomNavError):
    """A steering target has fallen behind the agent."""


class DegenerateBaselineError(LoomNavError, ValueError):
    """Leader and follower positions coincide."""


class ConfigurationError(LoomNavError, ValueError):
    """Scenario or episode configuration is inconsistent."""


class StatisticalPreconditionError(LoomNavError, ValueError):
    """Not enough data for the requested statistic."""


class TooFewArrivalsError(StatisticalPreconditionError):
    pass


class TooFewSamplesError(StatisticalPreconditionError):
    pass


class InsufficientEnsembleError(StatisticalPreconditionError):
    pass


class SeriesTooShortError(StatisticalPreconditionError):
    pass


class DegenerateVarianceError(StatisticalPreconditionError):
    pass


class RangeNotCoveredError(LoomNavError, ValueError):
    """Trajectory does not span the requested x range."""


class UnpairedInputError(LoomNavError, ValueError):
    """Pairing criteria matched nothing."""
