class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


class UnsupportedOperationError(ValueError):
    """Operation requested for a circuit family it does not apply to."""


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


class IntegrationError(RuntimeError):
    """The mode ODE integrator gave up before reaching the final time."""

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time t={last_time:.6e} s)")
        self.last_time = last_time
