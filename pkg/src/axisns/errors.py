"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid run configuration or operation arguments."""


class CorruptedStateError(FloatingPointError):
    """A field carries NaN or Inf values; ``field`` names it."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message)


class InvariantViolation(RuntimeError):
    """An internal numerical invariant failed; indicates a programming error."""


class BlowUpError(RuntimeError):
    """Loss of finiteness during time stepping.

    Carries the RK stage, the offending field name and (when known) the
    simulation time at which the failure was detected.
    """

    def __init__(self, stage, field, time=None):
        self.stage = stage
        self.field = field
        self.time = time
        where = f"RK stage {stage}" if isinstance(stage, int) else stage
        msg = f"non-finite values in {field!r} ({where})"
        if time is not None:
            msg += f" (t = {time:.17g})"
        super().__init__(msg)


class HypothesisViolation(ValueError):
    """Supplied data violates a hypothesis the operation checks; ``radius`` locates it."""

    def __init__(self, message, radius=None):
        self.radius = radius
        super().__init__(message)


class EigenConvergenceError(RuntimeError):
    """Iterative eigen-solver did not converge within its budget."""


class SnapshotError(RuntimeError):
    """Base class for snapshot persistence failures."""


class SnapshotVersionError(SnapshotError):
    pass


class SnapshotPayloadError(SnapshotError):
    pass


class SnapshotGridMismatch(SnapshotError):
    pass
