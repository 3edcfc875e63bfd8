"""Exception and warning types shared across the package."""


class WitnessError(Exception):
    """Base class for all errors raised by wernerwolf."""


class NotASignFunction(WitnessError, ValueError):
    """A vector that should hold only +1/-1 entries does not."""


class TooLarge(WitnessError):
    """The requested party count exceeds the configured budget."""


class NumericalFailure(WitnessError, ArithmeticError):
    """A numerical routine missed its accuracy guarantee."""


class BoundViolated(NumericalFailure):
    """A product state exceeded the separable bound |<W>| <= 1."""


class ConstructionInvalid(NumericalFailure):
    """A candidate construction failed numerical certification."""


class DidNotConverge(RuntimeWarning):
    """An iterative routine hit its iteration cap.

    Issued as a warning: the caller still receives the (flagged) result.
    """
