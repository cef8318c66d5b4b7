"""Exception types; the CLI maps them to exit codes."""


class InvalidInput(ValueError):
    """Malformed tree, mobile, map or weight sequence."""


class BudgetExhausted(RuntimeError):
    """A rejection loop ran out of attempts; ``stats`` holds what was seen."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class InvariantViolation(AssertionError):
    """A structural identity that must hold exactly did not."""


class AttemptAbandoned(RuntimeError):
    """A single tree draw hit its vertex cap; the caller may retry."""
