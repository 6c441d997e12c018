"""Exception types shared across the package."""


class DagShareError(Exception):
    """Base class for every error raised by this package."""


# instance validation
class MalformedInstance(DagShareError):
    pass


class CycleDetected(DagShareError):
    pass


class EdgeIntoSource(DagShareError):
    pass


class WeightNotPositive(DagShareError):
    pass


class TooFewContractors(DagShareError):
    pass


class WeightMapIncomplete(DagShareError):
    pass


# lookups
class UnknownNode(DagShareError):
    pass


class UnknownContractor(DagShareError):
    pass


# report profiles
class InvalidReport(DagShareError):
    pass


# graph algorithms
class Unreachable(DagShareError):
    pass


class UnreachableMember(DagShareError):
    pass


class TooManyNodes(DagShareError):
    pass


# generation and oracles
class InfeasibleParameters(DagShareError):
    pass


# audits
class BudgetExceeded(DagShareError):
    pass


class ParseError(DagShareError):
    """Syntax error in an instance or report-overlay file."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
