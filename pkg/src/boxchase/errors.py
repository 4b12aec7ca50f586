"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Two geometric objects of different dimensions were combined."""


class InstanceError(ValueError):
    """A game description is malformed or violates a structural requirement."""


class InternalInconsistencyError(RuntimeError):
    """A pipeline invariant broke, e.g. an empty optimization domain that the
    mesh construction was supposed to rule out."""


class SimulationError(RuntimeError):
    """A strategy returned an action that is infeasible in the current state."""


class OracleGuardError(RuntimeError):
    """The brute-force game tree exceeds the configured size guard."""
