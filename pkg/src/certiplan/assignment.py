"""Bottleneck assignment and sound allowable-perturbation intervals.

Weights are indexed ``W[agent, task]`` with at least as many agents as tasks;
``+inf`` marks a missing edge. An assignment maps every task to a distinct
agent and is optimal when its largest weight (the bottleneck) is minimal.

The interval family returned by :func:`allowable_intervals` rests on the
critical threshold ``T``: the smallest value ``t`` such that some other
task-saturating matching uses only off-assignment pairs of weight ``<= t``.
Every alternative therefore contains an off-assignment pair of weight
``>= T``, and keeping those pairs at or above a cap while the assigned pairs
stay at or below it preserves optimality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_assignment, check_weight_matrix
from .exceptions import ContractViolation, DomainError, InfeasibleError

__all__ = [
    "Assignment",
    "IntervalFamily",
    "saturating_matching",
    "solve_bap",
    "exists_alternative_matching",
    "critical_threshold",
    "allowable_intervals",
    "pair_containment",
    "certificate_check",
    "direct_certificate",
    "brute_force_allowability",
]


@dataclass(frozen=True)
class Assignment:
    task_to_agent: tuple[int, ...]
    bottleneck_value: float

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(a, t) for t, a in enumerate(self.task_to_agent)]

    def mask(self, n_agents: int) -> np.ndarray:
        m = np.zeros((n_agents, len(self.task_to_agent)), dtype=bool)
        m[list(self.task_to_agent), np.arange(len(self.task_to_agent))] = True
        return m


def saturating_matching(mask) -> list[int] | None:
    """Task-saturating matching inside a boolean ``(agents, tasks)`` mask.

    Augmenting paths are searched task by task, trying agents in index order,
    so the result is deterministic. Returns ``task_to_agent`` or ``None``.
    """
    mask = np.asarray(mask, dtype=bool)
    m, k = mask.shape
    adj = [np.flatnonzero(mask[:, t]).tolist() for t in range(k)]
    agent_of = [-1] * k
    task_of = [-1] * m

    def augment(t, seen):
        for a in adj[t]:
            if a in seen:
                continue
            seen.add(a)
            if task_of[a] == -1 or augment(task_of[a], seen):
                task_of[a] = t
                agent_of[t] = a
                return True
        return False

    for t in range(k):
        if not augment(t, set()):
            return None
    return agent_of


def _bottleneck(W, t2a) -> float:
    return float(max(W[a, t] for t, a in enumerate(t2a)))


def solve_bap(W) -> Assignment:
    """Threshold method: binary search on the distinct weights below ``+inf``.

    >>> solve_bap([[3, 1], [2, 4]])
    Assignment(task_to_agent=(1, 0), bottleneck_value=2.0)
    """
    W = check_weight_matrix(W, allow_neg_inf=True)
    present = ~np.isposinf(W)
    levels = np.unique(W[present])
    if not len(levels) or saturating_matching(present) is None:
        raise InfeasibleError("no task-saturating assignment avoids +inf weights")
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if saturating_matching(W <= levels[mid]) is None:
            lo = mid + 1
        else:
            hi = mid
    t2a = saturating_matching(W <= levels[lo])
    return Assignment(tuple(t2a), float(levels[lo]))


def _as_t2a(assignment, n_agents, n_tasks):
    t2a = assignment.task_to_agent if isinstance(assignment, Assignment) else assignment
    return check_assignment(t2a, n_agents, n_tasks)


def _has_cycle(succ: list[list[int]]) -> bool:
    """Iterative three-colour DFS cycle detection on a directed graph."""
    color = [0] * len(succ)
    for root in range(len(succ)):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
            elif color[nxt] == 1:
                return True
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def _changeable_tasks(mask: np.ndarray, t2a) -> np.ndarray:
    """Tasks that some alternative matching inside ``mask`` assigns to a different agent.

    In the graph "task t -> task t' whose agent may take t", an alternative
    moves t iff t reaches a task an idle agent may take, or lies on a cycle.
    """
    m, k = mask.shape
    idle = np.ones(m, dtype=bool)
    idle[list(t2a)] = False
    sink = mask[idle].any(axis=0) if idle.any() else np.zeros(k, dtype=bool)
    succ = [[u for u in range(k) if u != t and mask[t2a[u], t]] for t in range(k)]
    out = np.zeros(k, dtype=bool)
    for t in range(k):
        if sink[t]:
            out[t] = True
            continue
        seen = set()
        stack = list(succ[t])
        while stack:
            u = stack.pop()
            if u == t or sink[u]:
                out[t] = True
                break
            if u not in seen:
                seen.add(u)
                stack.extend(succ[u])
    return out


def exists_alternative_matching(mask, assignment, tasks=None) -> bool:
    """Whether ``mask`` admits a task-saturating matching other than ``assignment``.

    An alternative either hands some task to an idle agent, or (when no idle
    agent has an allowed pair) permutes tasks among the assigned agents, which
    is a cycle in the graph "task t -> task t' that t's agent may take".
    With ``tasks`` only alternatives that move one of those tasks count.
    """
    mask = np.asarray(mask, dtype=bool)
    m, k = mask.shape
    t2a = _as_t2a(assignment, m, k)
    if not all(mask[a, t] for t, a in enumerate(t2a)):
        raise ContractViolation("the assignment is not contained in the mask")
    if tasks is not None:
        return bool(_changeable_tasks(mask, t2a)[list(tasks)].any())
    idle = np.ones(m, dtype=bool)
    idle[list(t2a)] = False
    if mask[idle].any():
        return True
    succ = [[u for u in np.flatnonzero(mask[a]).tolist() if u != t] for t, a in enumerate(t2a)]
    return _has_cycle(succ)


def critical_threshold(W, assignment, tasks=None) -> float:
    """Smallest ``t`` such that an alternative matching uses off-assignment weights ``<= t``.

    ``+inf`` when no alternative with finite weights exists. With ``tasks``
    only alternatives moving one of those tasks are considered.
    """
    W = check_weight_matrix(W)
    m, k = W.shape
    t2a = _as_t2a(assignment, m, k)
    on = np.zeros((m, k), dtype=bool)
    on[list(t2a), np.arange(k)] = True
    off = ~on & np.isfinite(W)
    levels = np.unique(W[off])
    if not len(levels) or not exists_alternative_matching(on | off, t2a, tasks):
        return math.inf
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if exists_alternative_matching(on | (off & (W <= levels[mid])), t2a, tasks):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


@dataclass(frozen=True, eq=False)
class IntervalFamily:
    """Per-pair ranges ``[lower, upper]`` for perturbed weights.

    Equivalent to perturbation intervals ``[-lambda_down, lambda_up]`` around
    ``weights``; the ``lambda_*`` views are NaN where the weight is infinite.
    """

    lower: np.ndarray
    upper: np.ndarray
    weights: np.ndarray
    assignment: Assignment
    threshold: float

    @property
    def lambda_down(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(self.weights), self.weights - self.lower, np.nan)

    @property
    def lambda_up(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.where(np.isfinite(self.weights), self.upper - self.weights, np.nan)

    def contains(self, W) -> bool:
        W = np.asarray(W, dtype=float)
        return bool(np.all((W >= self.lower) & (W <= self.upper)))


def _mid(a: float, b: float) -> float:
    return b if math.isinf(b) else 0.5 * (a + b)


def allowable_intervals(W, assignment, mode: str = "threshold") -> IntervalFamily:
    """Sound allowable interval family for an optimal ``assignment``.

    With bottleneck ``b`` and critical threshold ``T``, ``mode="threshold"``
    gives:

    * ``T >= b``: assigned pairs may take any weight up to ``T``; off pairs of
      weight ``>= T`` must stay ``>= T``; the rest are unconstrained.
    * ``T < b``: assigned pairs at the bottleneck are frozen at ``b``, other
      assigned pairs stay ``<= b``; off pairs of weight ``>= b`` stay ``>= b``.

    Every off pair of weight exactly ``T`` then has no room below its weight,
    so bound intervals around midpoint weights never fit. ``mode="balanced"``
    splits the slack instead:

    * ``T >= b``: the cap is ``c = (b + T) / 2`` for assigned pairs and for
      off pairs of weight ``>= T``.
    * ``T < b`` with a single bottleneck task ``p``: let ``T_p`` be the
      threshold over alternatives that move ``p`` and ``b2`` the largest other
      assigned weight. Pair ``p`` gets ``[(b2 + b) / 2, (b + T_p) / 2]``, the
      other assigned pairs ``(-inf, (b2 + b) / 2]`` and off pairs of weight
      ``>= T_p`` stay above ``(b + T_p) / 2``. Alternatives keeping ``p`` are
      then never better, and those moving it pay at least the upper cap.
    * tied bottleneck tasks fall back to the threshold construction.

    >>> fam = allowable_intervals([[3, 1], [2, 4]], (1, 0))
    >>> fam.upper.tolist()
    [[inf, 4.0], [4.0, inf]]
    """
    if mode not in ("threshold", "balanced"):
        raise DomainError(f"unknown interval mode {mode!r}")
    W = check_weight_matrix(W)
    m, k = W.shape
    t2a = _as_t2a(assignment, m, k)
    b = _bottleneck(W, t2a)
    if not math.isfinite(b) or b != solve_bap(W).bottleneck_value:
        raise ContractViolation("assignment is not bottleneck-optimal for W")
    T = critical_threshold(W, t2a)
    on = np.zeros((m, k), dtype=bool)
    on[list(t2a), np.arange(k)] = True
    lower = np.full((m, k), -math.inf)
    upper = np.full((m, k), math.inf)
    assigned_w = W[list(t2a), np.arange(k)]
    top = np.flatnonzero(assigned_w == b)
    if mode == "balanced" and T >= b:
        cap = _mid(b, T)
        upper[on] = cap
        lower[~on & (W >= T)] = cap
        return IntervalFamily(lower, upper, W, Assignment(t2a, b), T)
    if mode == "balanced" and len(top) == 1:
        p = int(top[0])
        Tp = critical_threshold(W, t2a, tasks=[p])
        if Tp >= b:
            rest = np.delete(assigned_w, p)
            floor = _mid(float(rest.max()), b) if len(rest) else -math.inf
            cap = _mid(b, Tp)
            upper[on] = floor
            upper[t2a[p], p] = cap
            lower[t2a[p], p] = floor
            lower[~on & (W >= Tp)] = cap
            return IntervalFamily(lower, upper, W, Assignment(t2a, b), T)
    cap = T if T >= b else b
    upper[on] = cap
    if T < b:
        frozen = on & (W == b)
        lower[frozen] = b
    lower[~on & (W >= cap)] = cap
    return IntervalFamily(lower, upper, W, Assignment(t2a, b), T)


def pair_containment(L, U, W, intervals: IntervalFamily) -> np.ndarray:
    """Per-pair test that the bound interval ``[l, u]`` lies inside its allowable range.

    Pairs with an infinite upper bound or weight pass only when unconstrained.
    """
    L = np.asarray(L, dtype=float)
    U = np.asarray(U, dtype=float)
    W = np.asarray(W, dtype=float)
    if not (L.shape == U.shape == W.shape == intervals.lower.shape):
        raise DomainError("bounds, weights and intervals must share one shape")
    open_ = np.isneginf(intervals.lower) & np.isposinf(intervals.upper)
    inside = (L >= intervals.lower) & (U <= intervals.upper)
    return np.where(np.isposinf(U) | ~np.isfinite(W), open_, inside)


def certificate_check(L, U, W, intervals: IntervalFamily) -> bool:
    """Whether every bound interval lies inside its allowable range."""
    return bool(np.all(pair_containment(L, U, W, intervals)))


def _moves_some(mask: np.ndarray, t2a, tasks) -> bool:
    """Whether a task-saturating matching inside ``mask`` gives one of ``tasks`` a new agent."""
    m, k = mask.shape
    for t in tasks:
        for a in np.flatnonzero(mask[:, t]):
            if a == t2a[t]:
                continue
            rest = np.delete(np.delete(mask, a, axis=0), t, axis=1)
            if rest.shape[1] == 0 or saturating_matching(rest) is not None:
                return True
    return False


def direct_certificate(L, U, assignment) -> bool:
    """Whether ``assignment`` stays optimal for every weight matrix between ``L`` and ``U``.

    An alternative beats the assignment for some draw iff, with ``P`` the
    largest upper bound among the tasks it moves, every one of its pairs has a
    lower bound below ``P``. Trying each assigned upper bound as ``P`` makes
    the test exact; with ``L == U`` it decides plain bottleneck optimality.
    """
    L = check_weight_matrix(L, "L", allow_neg_inf=True)
    U = np.asarray(U, dtype=float)
    m, k = L.shape
    t2a = _as_t2a(assignment, m, k)
    u_on = U[list(t2a), np.arange(k)]
    for P in np.unique(u_on):
        if _moves_some(L < P, t2a, np.flatnonzero(u_on >= P)):
            return False
    return True


def brute_force_allowability(W, assignment, intervals: IntervalFamily, big: float | None = None) -> bool:
    """Exhaustive check that every weight choice inside ``intervals`` keeps ``assignment`` optimal.

    For each alternative matching only pairs it shares with the assignment
    need both range endpoints tried; pairs used only by the assignment are set
    to their maximum and pairs used only by the alternative to their minimum.
    Infinite endpoints are truncated at ``+-big``. Refuses more than 5 agents.
    """
    W = np.array(W, dtype=float)
    m, k = W.shape
    if m > 5:
        raise DomainError("brute-force allowability is limited to 5 agents")
    t2a = tuple(int(a) for a in (assignment.task_to_agent if isinstance(assignment, Assignment) else assignment))
    if big is None:
        finite = np.concatenate([x[np.isfinite(x)] for x in (W, intervals.lower, intervals.upper)] + [np.zeros(1)])
        big = 10.0 * float(np.abs(finite).max()) + 10.0
    lo = np.clip(intervals.lower, -big, big)
    hi = np.clip(intervals.upper, -big, big)
    mine = {(a, t) for t, a in enumerate(t2a)}
    for alt in itertools.permutations(range(m), k):
        if alt == t2a:
            continue
        theirs = {(a, t) for t, a in enumerate(alt)}
        shared = sorted(mine & theirs)
        only_mine = max((hi[p] for p in mine - theirs), default=-math.inf)
        only_theirs = max((lo[p] for p in theirs - mine), default=-math.inf)
        for corner in itertools.product((0, 1), repeat=len(shared)):
            vals = [lo[p] if c == 0 else hi[p] for p, c in zip(shared, corner)]
            shared_max = max(vals, default=-math.inf)
            if max(only_theirs, shared_max) < max(only_mine, shared_max):
                return False
    return True
