"""Exception types shared across the package."""


class ChronolabError(Exception):
    """Base class for every error raised by chronolab."""


class InvalidInputError(ChronolabError, ValueError):
    """Malformed or inconsistent input: dimensions, ranges, non-Hermitian data."""


class DivergenceError(ChronolabError, ArithmeticError):
    """A trajectory left the representable range; carries the failing step index."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class NumericalFailureError(ChronolabError, ArithmeticError):
    """A numerical procedure failed to converge or produced non-finite values."""


class NoPhysicalStatesError(ChronolabError):
    """The physical subspace is empty and the operation needs at least one state."""


class ConfigError(ChronolabError):
    """Scenario configuration is syntactically or semantically invalid.

    Collects every violation so a config can be fixed in one pass.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
