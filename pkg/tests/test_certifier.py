import math
import warnings

import numpy as np
import pytest

from certiplan.certifier import DriverParams, check_growth_condition, run
from certiplan.exceptions import DomainError, InfeasibleError
from certiplan.scenario_io import report_to_dict, scenario_from_dict
from certiplan.testkit import brute_force_bap


def free_scenario(agents, goals, s=0.05, size=1.0):
    return scenario_from_dict(
        {"workspace": {"min": [0, 0], "max": [size, size]}, "safety_distance": s, "agents": agents, "goals": goals}
    )


SMOKE = free_scenario([[0.2, 0.2], [0.8, 0.3]], [[0.3, 0.8], [0.75, 0.7]])


def test_growth_condition_examples():
    assert check_growth_condition(DriverParams())
    assert (75000 / 1024) ** (1 / 75000) == pytest.approx(1.0000573, abs=1e-7)
    assert check_growth_condition(DriverParams(n_min=500, n_max=500, alpha=1.01))


def test_growth_condition_warning():
    with pytest.warns(RuntimeWarning):
        DriverParams(n_min=2, n_max=10**6, alpha=1.00001)


def test_params_validated():
    for kw in ({"alpha": 1.0}, {"n_min": 0}, {"n_min": 10, "n_max": 5}, {"scheme": "hex"}, {"interval_mode": "x"}):
        with pytest.raises(DomainError), warnings.catch_warnings():
            warnings.simplefilter("ignore")
            DriverParams(**kw)


def test_obstacle_free_certifies_and_is_optimal():
    rep = run(SMOKE, DriverParams(n_min=1024))
    assert rep.certified
    assert len(rep.iterations) <= 2
    true_w = np.hypot(*(SMOKE.agents[:, None, :] - SMOKE.goals[None, :, :]).transpose(2, 0, 1))
    assert rep.assignment.task_to_agent in brute_force_bap(true_w)[1]
    last = rep.last
    assert last.direct_certificate is True
    assert np.all(last.lower <= last.upper)


def test_vacuous_iteration_skips_assignment():
    rep = run(SMOKE, DriverParams(n_min=64, n_max=20000))
    first = rep.iterations[0]
    assert first.delta is None and first.assignment is None and not first.certificate
    assert first.failing_pairs().all()


def test_cap_reached_without_certificate():
    rep = run(SMOKE, DriverParams(n_min=64, n_max=200))
    assert not rep.certified
    assert rep.iterations
    doc = report_to_dict(rep)
    assert doc["final"]["Q"] is False and doc["final"]["optimal_assignment"] is None


def test_machinery_is_monotone():
    rep = run(SMOKE, DriverParams(n_min=256, n_max=20000, interval_mode="threshold"))
    d = [r.dispersion_bound for r in rep.iterations]
    assert all(a > b for a, b in zip(d, d[1:]))
    deltas = [r.delta for r in rep.iterations if r.delta is not None]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    ns = [r.n_requested for r in rep.iterations]
    for prev, rec in zip(rep.iterations, rep.iterations[1:]):
        assert rec.n_requested == round(4 * prev.n_actual)
    assert ns[0] == 256


def test_threshold_mode_cannot_certify_midpoints():
    """Off pairs at the critical threshold get no room below their weight."""
    rep = run(SMOKE, DriverParams(n_min=1024, n_max=20000, interval_mode="threshold"))
    assert not rep.certified
    assert any(r.direct_certificate for r in rep.iterations if r.direct_certificate is not None)


def test_deterministic_reports():
    a = report_to_dict(run(SMOKE, DriverParams(n_min=1024)), include_timing=False)
    b = report_to_dict(run(SMOKE, DriverParams(n_min=1024)), include_timing=False)
    assert a == b
    rnd = DriverParams(n_min=1024, n_max=20000, scheme="random", seed=4)
    assert report_to_dict(run(SMOKE, rnd), include_timing=False) == report_to_dict(run(SMOKE, rnd), include_timing=False)


def test_disconnected_pair_aborts():
    sc = scenario_from_dict(
        {
            "workspace": {"min": [0, 0], "max": [3, 3]},
            "obstacles": [{"polygon": [[1.4, 0], [1.6, 0], [1.6, 3], [1.4, 3]]}],
            "safety_distance": 0.2,
            "agents": [[0.5, 1.5], [2.5, 1.5]],
            "goals": [[2.5, 0.5]],
        }
    )
    with pytest.raises(InfeasibleError) as err:
        run(sc, DriverParams(n_min=1024))
    assert err.value.pair == (0, 0)
