"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError


def check_weight_matrix(W, name: str = "W", allow_neg_inf: bool = False) -> np.ndarray:
    """Return ``W`` as a float array of shape ``(n_agents, n_tasks)``.

    ``+inf`` marks a missing agent-task edge. NaN is rejected, as is a matrix
    with more tasks than agents (swap roles before calling).
    """
    arr = np.array(W, dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DomainError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if np.isnan(arr).any():
        raise DomainError(f"{name} contains NaN")
    if not allow_neg_inf and np.isneginf(arr).any():
        raise DomainError(f"{name} contains -inf")
    if arr.shape[0] < arr.shape[1]:
        raise DomainError(f"{name} has more tasks ({arr.shape[1]}) than agents ({arr.shape[0]}); transpose it")
    return arr


def check_points(P, name: str = "points") -> np.ndarray:
    arr = np.array(P, dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DomainError(f"{name} must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def check_assignment(task_to_agent, n_agents: int, n_tasks: int) -> tuple[int, ...]:
    t2a = tuple(int(a) for a in task_to_agent)
    if len(t2a) != n_tasks:
        raise DomainError(f"assignment covers {len(t2a)} tasks, expected {n_tasks}")
    if any(not 0 <= a < n_agents for a in t2a):
        raise DomainError("assignment references an unknown agent")
    if len(set(t2a)) != len(t2a):
        raise DomainError("assignment gives one agent two tasks")
    return t2a
