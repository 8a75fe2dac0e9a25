"""Upper and lower bounds on shortest safe path lengths between robots and goals.

Upper bounds are lengths of feasible paths found in a roadmap over the
``s``-interior of the free space. Lower bounds come from a roadmap over the
relaxed ``(s - delta)``-interior: its shortest path, scaled by
``beta = 1 - 2 D / r``, cannot exceed the shortest ``s``-clearance path when
``D`` bounds the sample dispersion and ``2 D < r < delta - D``.

The margin and radius follow the schedule

    delta = (3 D)**zeta * s**(1 - zeta)
    r     = eta * 2 D + (1 - eta) * (delta - D)

which is only defined while ``3 D < s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, InfeasibleError
from .geometry import Workspace
from .roadmap import PathResult, Roadmap, build, shortest_paths
from .sampling import SampleSet

__all__ = [
    "BoundParams",
    "Schedule",
    "BoundsMatrix",
    "lower_schedule",
    "upper_radius",
    "check_assumption_radius",
    "upper_bounds",
    "lower_bounds",
    "compute_bounds",
]


@dataclass(frozen=True)
class BoundParams:
    s: float
    zeta: float = 0.1
    eta: float = 0.1
    euclid_floor: bool = True

    def __post_init__(self):
        if not self.s > 0:
            raise DomainError("safety distance must be positive")
        if not 0 < self.zeta < 1:
            raise DomainError("zeta must lie in (0, 1)")
        if not 0 < self.eta < 1:
            raise DomainError("eta must lie in (0, 1)")


@dataclass(frozen=True)
class Schedule:
    delta: float
    radius: float
    beta: float


def lower_schedule(dispersion: float, params: BoundParams) -> Schedule | None:
    """Margin, radius and scaling factor for a dispersion bound; ``None`` if ``3 D >= s``."""
    d, s = float(dispersion), params.s
    if d <= 0:
        raise DomainError("dispersion bound must be positive")
    if 3.0 * d >= s:
        return None
    delta = (3.0 * d) ** params.zeta * s ** (1.0 - params.zeta)
    r = params.eta * 2.0 * d + (1.0 - params.eta) * (delta - d)
    return Schedule(delta, r, 1.0 - 2.0 * d / r)


def upper_radius(dispersion: float, params: BoundParams) -> float:
    """Connection radius of the upper roadmap.

    Same as the lower schedule's radius; once ``3 D >= s`` it stays at
    ``2 D``, the value the schedule tends to as ``3 D`` approaches ``s``.
    """
    sched = lower_schedule(dispersion, params)
    return 2.0 * dispersion if sched is None else sched.radius


def check_assumption_radius(dispersion: float, delta: float, radius: float) -> bool:
    """Strict window ``2 D < r < delta - D``."""
    return 2.0 * dispersion < radius < delta - dispersion


def _euclid(starts, goals) -> np.ndarray:
    diff = starts[:, None, :] - goals[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def _pair_paths(rm: Roadmap) -> list[list[PathResult]]:
    return shortest_paths(rm, rm.start_indices, rm.goal_indices)


def _as_arrays(starts, goals):
    return (
        np.atleast_2d(np.asarray(starts, dtype=float)).reshape(-1, 2),
        np.atleast_2d(np.asarray(goals, dtype=float)).reshape(-1, 2),
    )


def upper_bounds(ws: Workspace, starts, goals, params: BoundParams, samples: SampleSet):
    """Feasible-path upper bounds; ``+inf`` where the roadmap does not connect.

    Returns ``(u, paths, roadmap)``.
    """
    starts, goals = _as_arrays(starts, goals)
    r = upper_radius(samples.dispersion_bound, params)
    rm = build(ws, starts, goals, params.s, r, samples)
    paths = _pair_paths(rm)
    u = np.array([[p.length for p in row] for row in paths], dtype=float)
    return u, paths, rm


def lower_bounds(ws: Workspace, starts, goals, params: BoundParams, samples: SampleSet):
    """Dispersion-scaled lower bounds from the relaxed roadmap.

    Returns ``(l, paths, schedule, roadmap)``; ``schedule`` and ``roadmap``
    are ``None`` when the dispersion bound is too coarse, in which case the
    bounds are ``-inf`` (or straight-line distances with ``euclid_floor``).

    Raises :class:`InfeasibleError` naming the first pair the relaxed roadmap
    leaves disconnected: no safe path can exist for it.
    """
    starts, goals = _as_arrays(starts, goals)
    floor = _euclid(starts, goals)
    sched = lower_schedule(samples.dispersion_bound, params)
    if sched is None:
        l = floor.copy() if params.euclid_floor else np.full(floor.shape, -math.inf)
        paths = [[PathResult.unreachable() for _ in range(len(goals))] for _ in range(len(starts))]
        return l, paths, None, None
    rm = build(ws, starts, goals, params.s - sched.delta, sched.radius, samples)
    paths = _pair_paths(rm)
    c = np.array([[p.length for p in row] for row in paths], dtype=float)
    for i, j in zip(*np.nonzero(~np.isfinite(c))):
        raise InfeasibleError(
            f"agent {i} and goal {j} are disconnected at the relaxed margin; "
            f"no path with clearance {params.s:g} exists",
            pair=(int(i), int(j)),
        )
    l = sched.beta * c
    if params.euclid_floor:
        l = np.maximum(l, floor)
    return l, paths, sched, rm


@dataclass(frozen=True, eq=False)
class BoundsMatrix:
    lower: np.ndarray
    upper: np.ndarray
    upper_paths: list = field(repr=False)
    lower_paths: list = field(repr=False)
    dispersion_bound: float
    delta: float | None
    radius_lower: float | None
    radius_upper: float
    beta: float | None

    @property
    def vacuous(self) -> bool:
        """True when the dispersion bound was too coarse for the lower bounds."""
        return self.delta is None

    @property
    def gap(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return self.upper - self.lower


def compute_bounds(ws: Workspace, starts, goals, params: BoundParams, samples: SampleSet) -> BoundsMatrix:
    u, up, rm_u = upper_bounds(ws, starts, goals, params, samples)
    l, lp, sched, _ = lower_bounds(ws, starts, goals, params, samples)
    return BoundsMatrix(
        lower=l,
        upper=u,
        upper_paths=up,
        lower_paths=lp,
        dispersion_bound=samples.dispersion_bound,
        delta=None if sched is None else sched.delta,
        radius_lower=None if sched is None else sched.radius,
        radius_upper=rm_u.radius,
        beta=None if sched is None else sched.beta,
    )
