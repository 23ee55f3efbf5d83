"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or mathematically inadmissible input."""


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of budget before reaching a verdict.

    Distinct from a negative answer: the search was inconclusive.
    """


class VerificationError(AssertionError):
    """A computed certificate failed its re-verification (an internal bug)."""
