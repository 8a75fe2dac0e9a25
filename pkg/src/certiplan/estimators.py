"""scikit-learn style wrappers over the functional API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_weight_matrix
from .assignment import allowable_intervals, certificate_check, critical_threshold, solve_bap
from .certifier import DriverParams, run

__all__ = ["BottleneckAssigner", "CertifiedGoalAssigner"]


class BottleneckAssigner(BaseEstimator):
    """Bottleneck assignment of an ``(agents, tasks)`` weight matrix.

    ``fit`` solves the assignment and its allowable intervals; ``predict``
    returns the agent chosen for each task of a new matrix.
    """

    def __init__(self, interval_mode: str = "threshold"):
        self.interval_mode = interval_mode

    def fit(self, W, y=None):
        W = check_weight_matrix(W)
        a = solve_bap(W)
        self.assignment_ = a
        self.bottleneck_ = a.bottleneck_value
        self.critical_threshold_ = critical_threshold(W, a)
        self.intervals_ = allowable_intervals(W, a, self.interval_mode)
        self.n_agents_, self.n_tasks_ = W.shape
        return self

    def predict(self, W=None) -> np.ndarray:
        check_is_fitted(self, "assignment_")
        if W is None:
            return np.array(self.assignment_.task_to_agent)
        return np.array(solve_bap(W).task_to_agent)

    def certify(self, L, U) -> bool:
        """Whether every ``[l, u]`` interval lies inside the fitted allowable ranges."""
        check_is_fitted(self, "intervals_")
        return certificate_check(L, U, self.intervals_.weights, self.intervals_)


class CertifiedGoalAssigner(BaseEstimator):
    """Runs the certification loop on a scenario; hyperparameters mirror :class:`DriverParams`."""

    def __init__(
        self,
        n_min: int = 1024,
        n_max: int = 75000,
        alpha: float = 4.0,
        zeta: float = 0.1,
        eta: float = 0.1,
        scheme: str = "triangular",
        seed=None,
        euclid_floor: bool = True,
        interval_mode: str = "balanced",
    ):
        self.n_min = n_min
        self.n_max = n_max
        self.alpha = alpha
        self.zeta = zeta
        self.eta = eta
        self.scheme = scheme
        self.seed = seed
        self.euclid_floor = euclid_floor
        self.interval_mode = interval_mode

    def fit(self, scenario, y=None):
        params = DriverParams(**self.get_params())
        self.report_ = run(scenario, params)
        self.certified_ = self.report_.certified
        self.assignment_ = self.report_.assignment
        return self

    def predict(self, X=None) -> np.ndarray:
        """Robot index per goal of the last assignment (empty if none was computed)."""
        check_is_fitted(self, "report_")
        if self.assignment_ is None:
            return np.zeros(0, dtype=int)
        return np.array(self.assignment_.task_to_agent)
