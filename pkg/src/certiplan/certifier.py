"""Iterative planning and assignment with an optimality certificate.

Each iteration samples ``n`` points, bounds every robot-goal path length from
above and below, assigns goals on the interval midpoints and checks whether
all bound intervals fall inside the allowable ranges of that assignment. If
so the assignment is optimal for the true shortest safe path lengths and the
loop stops; otherwise ``n`` grows by ``alpha`` until ``n_max`` is exceeded.
"""

from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .assignment import (
    Assignment,
    IntervalFamily,
    allowable_intervals,
    certificate_check,
    direct_certificate,
    pair_containment,
    saturating_matching,
    solve_bap,
)
from .bounds import BoundParams, BoundsMatrix, compute_bounds
from .exceptions import DomainError
from .sampling import Scheme, generate

__all__ = ["DriverParams", "IterationRecord", "CertificationReport", "check_growth_condition", "run"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DriverParams:
    n_min: int = 1024
    n_max: int = 75000
    alpha: float = 4.0
    zeta: float = 0.1
    eta: float = 0.1
    scheme: str = "triangular"
    seed: int | None = None
    euclid_floor: bool = True
    interval_mode: str = "balanced"

    def __post_init__(self):
        if int(self.n_min) != self.n_min or self.n_min < 1:
            raise DomainError("n_min must be a positive integer")
        if int(self.n_max) != self.n_max or self.n_max < self.n_min:
            raise DomainError("n_max must be an integer no smaller than n_min")
        if not self.alpha > 1:
            raise DomainError("alpha must exceed 1")
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme).value)
        if self.interval_mode not in ("threshold", "balanced"):
            raise DomainError("interval_mode must be 'threshold' or 'balanced'")
        if not check_growth_condition(self):
            warnings.warn(
                f"alpha={self.alpha} does not exceed (n_max/n_min)**(1/n_max); the iteration count is not bounded by n_max",
                RuntimeWarning,
                stacklevel=3,
            )


def check_growth_condition(params: DriverParams) -> bool:
    """``alpha > (n_max / n_min) ** (1 / n_max)``."""
    return params.alpha > (params.n_max / params.n_min) ** (1.0 / params.n_max)


@dataclass(eq=False)
class IterationRecord:
    n_requested: int
    n_actual: int
    dispersion_bound: float
    bounds: BoundsMatrix
    weights: np.ndarray | None
    assignment: Assignment | None
    intervals: IntervalFamily | None
    certificate: bool
    direct_certificate: bool | None
    wall_time_seconds: float
    confidence: float = 1.0

    @property
    def delta(self):
        return self.bounds.delta

    @property
    def radius_lower(self):
        return self.bounds.radius_lower

    @property
    def radius_upper(self):
        return self.bounds.radius_upper

    @property
    def beta(self):
        return self.bounds.beta

    @property
    def lower(self) -> np.ndarray:
        return self.bounds.lower

    @property
    def upper(self) -> np.ndarray:
        return self.bounds.upper

    @property
    def max_gap(self) -> float:
        gap = self.bounds.gap
        return float(np.nanmax(gap)) if gap.size else math.nan

    def failing_pairs(self) -> np.ndarray:
        """Mask of pairs whose bound interval leaves its allowable range."""
        if self.intervals is None:
            return np.ones(self.bounds.upper.shape, dtype=bool)
        return ~pair_containment(self.bounds.lower, self.bounds.upper, self.weights, self.intervals)


@dataclass(eq=False)
class CertificationReport:
    iterations: list[IterationRecord] = field(default_factory=list)
    certified: bool = False
    assignment: Assignment | None = None
    total_time: float = 0.0
    params: DriverParams | None = None
    roles_swapped: bool = False

    @property
    def last(self) -> IterationRecord:
        return self.iterations[-1]


def _midpoints(L: np.ndarray, U: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        W = 0.5 * (L + U)
    return np.where(np.isposinf(U), math.inf, W)


def run(scenario, params: DriverParams | None = None) -> CertificationReport:
    """Run the certification loop on a :class:`~certiplan.scenario_io.Scenario`."""
    params = params or DriverParams()
    bp = BoundParams(scenario.safety_distance, params.zeta, params.eta, params.euclid_floor)
    ws = scenario.workspace
    report = CertificationReport(params=params, roles_swapped=getattr(scenario, "roles_swapped", False))
    t_all = time.perf_counter()
    n = int(params.n_min)
    while n <= params.n_max:
        t0 = time.perf_counter()
        samples = generate(ws, params.scheme, n, params.seed)
        bounds = compute_bounds(ws, scenario.agents, scenario.goals, bp, samples)
        W = assignment = fam = direct = None
        q = False
        if bounds.vacuous:
            log.info("n=%d: dispersion bound %.4g too coarse for lower bounds, skipping assignment", n, samples.dispersion_bound)
        elif saturating_matching(np.isfinite(bounds.upper)) is None:
            # the relaxed roadmap connects every pair, so only the upper roadmap is still too sparse
            log.info("n=%d: no finite upper bounds for a full assignment yet, skipping assignment", n)
        else:
            W = _midpoints(bounds.lower, bounds.upper)
            assignment = solve_bap(W)
            fam = allowable_intervals(W, assignment, params.interval_mode)
            q = certificate_check(bounds.lower, bounds.upper, W, fam)
            direct = direct_certificate(bounds.lower, bounds.upper, assignment)
        rec = IterationRecord(
            n_requested=n,
            n_actual=samples.actual_n,
            dispersion_bound=samples.dispersion_bound,
            bounds=bounds,
            weights=W,
            assignment=assignment,
            intervals=fam,
            certificate=q,
            direct_certificate=direct,
            wall_time_seconds=time.perf_counter() - t0,
            confidence=samples.confidence,
        )
        report.iterations.append(rec)
        log.info(
            "n=%d (actual %d): D=%.4g delta=%s beta=%s Q=%s direct=%s (%.2fs)",
            n, samples.actual_n, samples.dispersion_bound, rec.delta, rec.beta, q, direct, rec.wall_time_seconds,
        )
        if assignment is not None:
            report.assignment = assignment
        if q:
            report.certified = True
            break
        n = int(round(params.alpha * samples.actual_n))
    report.total_time = time.perf_counter() - t_all
    return report
