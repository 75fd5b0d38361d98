"""Exception types shared across the package."""


class RuinlabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(RuinlabError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedHazard(RuinlabError):
    """The law has no closed-form cumulative hazard / inverse."""


class UnsupportedCombination(RuinlabError):
    """No analytic or sampling route exists for this law/tilt combination."""


class NonFiniteMoment(RuinlabError):
    """A tilted first moment is infinite, so the pair cannot be admissible."""


class SecondMomentInfinite(RuinlabError):
    """The claim law has no finite second moment (required by linear tilts)."""


class SupportMismatch(RuinlabError):
    """Target densities are not positive everywhere the model densities are."""


class MgfUnavailable(RuinlabError):
    """The moment generating function has zero radius of convergence."""


class NoBracket(RuinlabError):
    """A root finder could not bracket a sign change (defensive; should not occur)."""


class StepCapExceeded(RuinlabError):
    """A replication hit the step cap before terminating.

    Signals a non-admissible or numerically degenerate tilt; the estimate
    must not be silently truncated.
    """

    def __init__(self, replication: int, steps: int):
        super().__init__(
            f"replication {replication} exceeded the step cap ({steps} steps); "
            "the tilt is likely not ruin-inducing"
        )
        self.replication = replication
        self.steps = steps


class ConfigError(RuinlabError):
    """A model/tilt/run configuration failed to parse or validate."""
