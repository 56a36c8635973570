"""Exception hierarchy shared by every rieszlab module."""


class RieszLabError(Exception):
    """Base class for all numerical and model failures raised by rieszlab."""


class DimensionMismatch(RieszLabError, ValueError):
    pass


class SingularMatrix(RieszLabError, ArithmeticError):
    pass


class NumericalOverflow(RieszLabError, OverflowError):
    pass


class NodeEvaluationFailure(RieszLabError):
    """An integrand raised at a quadrature node; the node is kept on ``.node``."""

    def __init__(self, node, cause):
        super().__init__(f"integrand failed at node {node!r}: {cause}")
        self.node = node
        self.cause = cause


class ContourTooCloseToSpectrum(RieszLabError):
    pass


class SpectrumOnPath(RieszLabError):
    pass


class InvalidProjector(RieszLabError):
    pass


class NotNilpotent(RieszLabError):
    pass


class SpectrumNotZero(RieszLabError):
    pass


class TruncationInsufficient(RieszLabError):
    pass


class BudgetExceeded(RieszLabError):
    pass


class RationalAlpha(RieszLabError, ValueError):
    pass


class DegenerateSpectrum(RieszLabError, ValueError):
    pass
