"""Exception hierarchy shared across the library."""


class InoqesError(Exception):
    """Base class for all library errors."""


class PoleProximityError(InoqesError):
    """Evaluation point is inside the exclusion radius of a pole."""


class SeriesNotConvergedError(InoqesError):
    """Series tail bound still above tolerance at the truncation order."""


class DivisionByNearZeroError(InoqesError):
    """A denominator value is numerically indistinguishable from zero."""


class BranchPointProximityError(InoqesError):
    """Fractional power requested too close to a branch point."""


class LengthExceededError(InoqesError):
    """Partition longer than the number of variables."""


class NonCancellationError(InoqesError):
    """Exact division left a remainder; signals an internal algebra bug."""


class InadmissibleGaugeError(InoqesError):
    """Gauge choice with d not a non-negative integer."""


class NoConvergenceError(InoqesError):
    """Iterative eigensolver failed to converge."""


class AssumptionViolatedError(InoqesError):
    """A standing assumption on the couplings does not hold."""


class UnsupportedNError(InoqesError):
    """Requested particle number outside the supported desk-scale range."""


class IllConditionedError(InoqesError):
    """Collocation system condition number above the safety threshold."""


class RankDeficientError(InoqesError):
    """Sampled basis failed its rank certificate."""


class ZeroNomeError(InoqesError):
    """The nome p must be nonzero."""


class ConstraintViolatedError(InoqesError):
    """Derived coupling constraints are not satisfied."""


class ConfigError(InoqesError):
    """Malformed or inconsistent run configuration."""


class ComputationFailedError(InoqesError):
    """A task-level assertion failed."""
