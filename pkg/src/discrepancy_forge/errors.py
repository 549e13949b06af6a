"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """A numerical integration failed to converge or produced values that
    contradict a provable property (e.g. a provably positive kernel going
    negative beyond tolerance)."""


class ResonanceError(ValueError):
    """A diophantine sum hit an exact (or float-level) rational resonance,
    so the sum is infinite for the requested generator."""


class InvariantViolation(RuntimeError):
    """A run-time check of a mathematical invariant failed beyond its budget.

    Carries the name of the check plus observed/allowed values so batch
    runners can report it and exit with a dedicated status code.
    """

    def __init__(self, check: str, observed: float, allowed: float):
        self.check = check
        self.observed = observed
        self.allowed = allowed
        super().__init__(f"{check}: observed {observed!r}, allowed {allowed!r}")


class ConfigError(ValueError):
    """An experiment configuration is malformed or out of supported range."""
