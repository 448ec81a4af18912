"""Exception hierarchy shared by every layer of the toolkit."""


class ExpDiophError(Exception):
    """Base class for all toolkit failures."""


class PrecisionExhausted(ExpDiophError):
    """An interval was too wide to decide a floor, sign or comparison.

    Callers are expected to re-enter at a higher working precision.
    """


class DomainError(ExpDiophError, ValueError):
    pass


class IndexOutOfRange(ExpDiophError, IndexError):
    pass


class ZeroInput(ExpDiophError, ValueError):
    pass


class DegenerateDenominator(ExpDiophError):
    pass


class HypothesisViolation(ExpDiophError):
    pass


class NoConvergentFound(ExpDiophError):
    pass


class DegenerateCase(ExpDiophError):
    pass


class NonConvergence(ExpDiophError):
    pass


class DegenerateSpec(ExpDiophError):
    pass


class ConstantDrift(ExpDiophError):
    """A recomputed constant disagrees with its published value beyond tolerance."""


class ProofIncomplete(ExpDiophError):
    """A pipeline step could not close its case; carries the partial ledger."""

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger
