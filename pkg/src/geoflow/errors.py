"""Exception types shared across the package."""


class ContractError(ValueError):
    """An input violates a documented precondition (shape, symmetry, cocycle identity...)."""


class ConfigError(ValueError):
    """A run configuration is malformed or names something outside the catalog."""


class IntegrationDiverged(RuntimeError):
    """Raised when a time integration leaves the smooth regime.

    ``time`` is the simulation time at which divergence was detected and
    ``trajectory`` (when available) holds every snapshot recorded before it.
    """

    def __init__(self, message, time, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory
