"""Exception hierarchy.

Every exception carries a ``status`` used by the command line to pick an exit
code: ``invalid_input`` (2), ``infeasible`` (3) or ``internal`` (1).
"""


class CrossCovError(Exception):
    status = "internal"


class InvalidInput(CrossCovError, ValueError):
    status = "invalid_input"


class Infeasible(CrossCovError, ValueError):
    status = "infeasible"


# covariance_core
class WrongDimensions(InvalidInput):
    pass


class NotSymmetric(InvalidInput):
    pass


class NotPSD(InvalidInput):
    pass


class RankTooHigh(Infeasible):
    pass


# parameterization
class ZeroCrossCovariance(Infeasible):
    pass


class NonPositiveAlpha(InvalidInput):
    pass


class InfeasiblePoint(Infeasible):
    def __init__(self, message, failing=()):
        super().__init__(message)
        self.failing = tuple(failing)


class InfeasibleAlpha(InfeasiblePoint):
    pass


class BracketingFailure(CrossCovError, ArithmeticError):
    pass


class DimensionMismatch(InvalidInput):
    pass


# graphs
class GraphError(InvalidInput):
    pass


class UnknownVertex(GraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonDisjointSets(GraphError):
    pass


class NotAncestral(GraphError):
    pass


class GraphTooLarge(GraphError):
    pass


class VertexSetMismatch(GraphError):
    pass


# simulation
class TooFewRows(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class DegenerateBlock(InvalidInput):
    pass
