"""Exception hierarchy shared by all certiplan modules."""


class CertiplanError(Exception):
    """Base class for every error raised by certiplan."""

    code = "error"


class DomainError(CertiplanError, ValueError):
    """An argument lies outside the domain of an operation."""

    code = "domain"


class InfeasibleError(CertiplanError):
    """No feasible solution exists, typically a breach of the path-existence assumption.

    ``pair`` holds the ``(agent, goal)`` index pair when the failure can be
    attributed to one robot-goal pair, and ``node`` names an offending roadmap
    endpoint (e.g. ``"agent 2"``) when a position violates the clearance margin.
    """

    code = "infeasible"

    def __init__(self, message, pair=None, node=None):
        super().__init__(message)
        self.pair = pair
        self.node = node


class ContractViolation(CertiplanError):
    """A precondition between collaborating routines does not hold."""

    code = "contract"


class ScenarioError(CertiplanError):
    """Base class for scenario ingestion failures."""

    code = "scenario"


class MalformedScenarioError(ScenarioError):
    code = "malformed"


class ClearanceError(ScenarioError):
    """A robot or goal position does not keep the safety distance."""

    code = "clearance"

    def __init__(self, message, role=None, index=None):
        super().__init__(message)
        self.role = role
        self.index = index


class DegeneratePolygonError(ScenarioError, DomainError):
    code = "degenerate_polygon"
