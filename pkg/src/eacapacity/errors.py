"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class DivergenceError(ArithmeticError):
    """A requested limit is infinite (e.g. log((1+nu)/nu) at nu = 0)."""


class NoCrossingError(RuntimeError):
    """The entanglement-assisted advantage never reaches the requested factor."""


class ConfigError(ValueError):
    """Invalid run configuration. ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
