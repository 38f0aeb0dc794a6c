"""Exception hierarchy shared by all modules."""


class LadicError(Exception):
    """Base class for library errors."""


class PrecisionExhausted(LadicError):
    """A quantity is indistinguishable from zero at the working precision."""


class NotAUnit(LadicError):
    pass


class NoSimpleRoot(LadicError):
    pass


class BadSpec(LadicError):
    pass


class BadParameters(LadicError):
    pass


class NoConjugation(LadicError):
    pass


class DegenerateForm(LadicError):
    pass


class ValuesNotIntegral(LadicError):
    pass


class UnsupportedFamily(LadicError):
    pass


class SymmetryMismatch(LadicError):
    pass


class TooLarge(LadicError):
    pass


class SearchSpaceTooLarge(TooLarge):
    pass


class HypothesesUnmet(LadicError):
    """Raised when the hypotheses of a result fail and no conclusion may be drawn."""


class RigidityViolation(LadicError):
    """A nontrivial finite-order kernel element survived the rigidity hypotheses."""


class DegenerateBlock(LadicError):
    pass


class OracleRefuted(LadicError):
    """The obstruction enumeration found a perfect cell."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionFailed(LadicError):
    pass
