"""Exception hierarchy shared across the package."""


class IlwError(Exception):
    """Base class for all errors raised by this package."""


class TruncationMismatch(IlwError):
    """Two values with different truncation orders were combined."""


class NotDivisible(IlwError):
    """Exact division failed because some term lacks the required factor."""


class NotRealEven(IlwError):
    """Value contains the imaginary unit or odd series powers where a
    real, even value is required."""


class NotATotalDerivative(IlwError):
    """Integration by parts stalled: the input is not in the image of
    the total derivative."""


class NotHomogeneous(IlwError):
    """Differential polynomial has terms of different weights."""


class SecondOrderOverflow(IlwError):
    """Operator composition would produce a second-order derivative part."""


class DepthInsufficient(IlwError):
    """Requested object needs more series depth than was computed."""


class ResidualTerms(IlwError):
    """A commutator that must be purely diagonal has off-diagonal terms."""


class NonConvergence(IlwError):
    """Fixed-point iteration failed to stabilize (implementation bug)."""


class BadLeading(IlwError):
    """Symbol series does not have the unit leading coefficient."""


class ConstructionFailure(IlwError):
    """The operator recursion failed at some step; carries the step index."""

    def __init__(self, step: int, reason: Exception):
        self.step = step
        self.reason = reason
        super().__init__(f"construction failed at recursion step {step}: {reason}")
