"""Exception types shared across voakit."""


class VoakitError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(VoakitError, ValueError):
    """An AlgebraConfig (or CLI run config) violates its invariants."""


class ParseError(VoakitError, ValueError):
    pass


class TruncationExceeded(VoakitError):
    """A result would contain states above the truncation degree."""


class InhomogeneousInput(VoakitError, ValueError):
    pass


class NotSemisimple(VoakitError):
    pass


class NonIntegerEigenvalue(VoakitError):
    pass


class NotConformal(VoakitError):
    pass


class NotInJ1(VoakitError, ValueError):
    pass


class GradingIncompatible(VoakitError):
    pass


class HypothesisFailed(VoakitError):
    """A hypothesis of the projection-automorphism construction fails.

    ``condition`` names the violated requirement, e.g. ``"pr_2(a) == omega"``.
    """

    def __init__(self, condition, detail=""):
        self.condition = condition
        msg = f"hypothesis failed: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NotAutomorphism(VoakitError):
    pass


class NotStrongCFT(VoakitError):
    pass


class CounterexampleFound(VoakitError):
    pass


class InvariantViolation(VoakitError, AssertionError):
    """An internal consistency check that the theory says can never fail."""


class ScftV2Violation(InvariantViolation):
    pass
