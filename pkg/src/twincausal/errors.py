"""Exception hierarchy shared by every module in the package."""


class TwinCausalError(Exception):
    """Base class for all package errors."""


# -- graph structure ---------------------------------------------------------

class GraphError(TwinCausalError, ValueError):
    pass


class CycleError(GraphError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("graph contains the cycle " + " -> ".join(self.cycle))


class UnknownVariable(GraphError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown variable {name!r}")


class OverlappingSets(GraphError):
    pass


class DuplicateDeclaration(GraphError):
    pass


class GraphSyntaxError(GraphError):
    """Raised by the graph DSL parser; ``line`` is 1-based."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class StateOutOfRange(GraphError):
    pass


# -- identification / estimands ----------------------------------------------

class LatentTreatment(GraphError):
    pass


class NotIdentifiedError(TwinCausalError):
    pass


class ZeroConditioningMass(TwinCausalError, ZeroDivisionError):
    def __init__(self, event):
        self.event = event
        super().__init__(f"conditioning event has zero mass: {event}")


class MissingVariable(TwinCausalError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing variable"


# -- data --------------------------------------------------------------------

class DataError(TwinCausalError, ValueError):
    pass


class HeaderMismatch(DataError):
    pass


class NegativeCount(DataError):
    pass


class OutOfRangeState(DataError):
    pass


class DuplicateAssignment(DataError):
    pass


class EmptyTable(DataError):
    pass


# -- inference ---------------------------------------------------------------

class LatentPresent(TwinCausalError, ValueError):
    pass


class UnfittedPosterior(TwinCausalError, ValueError):
    pass


class NoAcceptedSamples(TwinCausalError, RuntimeError):
    pass


class UnnormalizedCpt(TwinCausalError, ValueError):
    pass
