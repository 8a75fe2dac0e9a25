"""Certified optimal goal assignment for robots in a polygonal workspace.

Sampling-based roadmaps bound every robot-goal shortest safe path from above
and below; a bottleneck assignment on the interval midpoints is certified
optimal once all bound intervals sit inside its allowable perturbation ranges.
"""

from .assignment import (
    Assignment,
    IntervalFamily,
    allowable_intervals,
    certificate_check,
    critical_threshold,
    direct_certificate,
    exists_alternative_matching,
    solve_bap,
)
from .bounds import BoundParams, BoundsMatrix, compute_bounds, lower_schedule
from .certifier import CertificationReport, DriverParams, IterationRecord, check_growth_condition, run
from .estimators import BottleneckAssigner, CertifiedGoalAssigner
from .exceptions import (
    CertiplanError,
    ClearanceError,
    ContractViolation,
    DegeneratePolygonError,
    DomainError,
    InfeasibleError,
    MalformedScenarioError,
    ScenarioError,
)
from .geometry import Polygon, Workspace, make_workspace, rectangle
from .sampling import SampleSet, Scheme, generate
from .scenario_io import Scenario, load_scenario, write_report

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "IntervalFamily",
    "allowable_intervals",
    "certificate_check",
    "critical_threshold",
    "direct_certificate",
    "exists_alternative_matching",
    "solve_bap",
    "BoundParams",
    "BoundsMatrix",
    "compute_bounds",
    "lower_schedule",
    "CertificationReport",
    "DriverParams",
    "IterationRecord",
    "check_growth_condition",
    "run",
    "BottleneckAssigner",
    "CertifiedGoalAssigner",
    "CertiplanError",
    "ClearanceError",
    "ContractViolation",
    "DegeneratePolygonError",
    "DomainError",
    "InfeasibleError",
    "MalformedScenarioError",
    "ScenarioError",
    "Polygon",
    "Workspace",
    "make_workspace",
    "rectangle",
    "SampleSet",
    "Scheme",
    "generate",
    "Scenario",
    "load_scenario",
    "write_report",
]
