import math

import numpy as np
import pytest

from certiplan.bounds import (
    BoundParams,
    check_assumption_radius,
    compute_bounds,
    lower_bounds,
    lower_schedule,
    upper_bounds,
    upper_radius,
)
from certiplan.exceptions import DomainError, InfeasibleError
from certiplan.geometry import make_workspace, rectangle
from certiplan.sampling import generate
from certiplan.testkit import GridOracleParams, grid_shortest_path, path_clearance

P = BoundParams(0.3)


@pytest.mark.parametrize(
    "D, delta, r, beta",
    [(0.071, 0.290, 0.211, 0.332), (0.035, 0.270, 0.219, 0.677), (0.018, 0.252, 0.215, 0.835)],
)
def test_schedule_chain(D, delta, r, beta):
    sch = lower_schedule(D, P)
    assert sch.delta == pytest.approx(delta, abs=1e-3)
    assert sch.radius == pytest.approx(r, abs=2e-3)
    assert sch.beta == pytest.approx(beta, abs=1e-2)
    assert check_assumption_radius(D, sch.delta, sch.radius)


def test_schedule_vacuous_when_too_coarse():
    assert lower_schedule(0.1, P) is None
    assert lower_schedule(0.11, P) is None
    # the upper radius still exists
    assert upper_radius(0.11, P) == pytest.approx(0.22)
    # continuous with the schedule at 3 D = s
    assert upper_radius(0.1 - 1e-9, P) == pytest.approx(0.2, abs=1e-6)
    with pytest.raises(DomainError):
        lower_schedule(0.0, P)


def test_assumption_radius_examples():
    assert check_assumption_radius(0.071, 0.290, 0.211)
    assert not check_assumption_radius(0.071, 0.290, 0.142)
    for r in np.linspace(0.0, 1.0, 41):
        assert not check_assumption_radius(0.1, 0.3, r)


def test_params_validated():
    for kw in ({"s": 0}, {"s": 0.3, "zeta": 1.0}, {"s": 0.3, "eta": 0.0}):
        with pytest.raises(DomainError):
            BoundParams(**kw)


def test_obstacle_free_unit_distance():
    ws = make_workspace([-1, -1], [2, 1])
    prev = math.inf
    for n in (1000, 4000, 16000):
        ss = generate(ws, "triangular", n)
        b = compute_bounds(ws, [[0, 0]], [[1, 0]], BoundParams(0.2), ss)
        assert b.lower[0, 0] == 1.0
        assert 1.0 <= b.upper[0, 0] <= prev
        prev = b.upper[0, 0]
    assert prev < 1.01
    l, _, _, _ = lower_bounds(ws, [[0, 0]], [[1, 0]], BoundParams(0.2, euclid_floor=False), ss)
    assert l[0, 0] <= 1.0


def test_detour_matches_grid_oracle():
    # wall with a single corner: goal is reached around the wall's end at clearance s
    ws = make_workspace([0, 0], [3, 3], [rectangle(1.4, 0.0, 1.6, 2.0)])
    s = 0.2
    a, b = [0.6, 0.6], [2.4, 0.6]
    ss = generate(ws, "triangular", 40000)
    u, paths, _ = upper_bounds(ws, [a], [b], BoundParams(s), ss)
    est = grid_shortest_path(ws, s, a, b, GridOracleParams(0.01, shortcut=True))
    assert u[0, 0] >= est.length * (1 - 1e-3)
    assert u[0, 0] == pytest.approx(est.length, rel=0.03)
    assert path_clearance(ws, paths[0][0].waypoints) >= s - 1e-9


def test_narrow_corridor_has_no_upper_bound():
    # gap of 0.5 between the walls; robots need 2 * 0.3 = 0.6
    ws = make_workspace([0, 0], [3, 3], [rectangle(1.4, 0.0, 1.6, 1.25), rectangle(1.4, 1.75, 1.6, 3.0)])
    for n in (1000, 4000, 16000):
        u, _, _ = upper_bounds(ws, [[0.5, 1.5]], [[2.5, 1.5]], P, generate(ws, "triangular", n))
        assert u[0, 0] == math.inf


def test_disconnected_at_relaxed_margin_raises():
    ws = make_workspace([0, 0], [3, 3], [rectangle(1.4, 0.0, 1.6, 3.0)])
    ss = generate(ws, "triangular", 4000)
    with pytest.raises(InfeasibleError) as err:
        lower_bounds(ws, [[0.5, 1.5]], [[2.5, 1.5]], P, ss)
    assert err.value.pair == (0, 0)


def test_sandwich_and_witness_feasibility(rng):
    from conftest import random_scene

    for _ in range(3):
        ws = random_scene(rng, n_obstacles=2)
        s = 0.1
        pts = []
        while len(pts) < 3:
            p = rng.uniform(0.2, 3.8, 2)
            if grid_clear(ws, p, s + 0.05):
                pts.append(p)
        ss = generate(ws, "triangular", 6000)
        b = compute_bounds(ws, pts[:2], pts[2:], BoundParams(s), ss)
        fin = np.isfinite(b.upper)
        assert np.all(b.lower[fin] <= b.upper[fin])
        for i in range(2):
            if b.upper_paths[i][0].reachable:
                assert path_clearance(ws, b.upper_paths[i][0].waypoints) >= s - 1e-9


def grid_clear(ws, p, s):
    from certiplan.geometry import obstacle_distances

    return bool(obstacle_distances(ws, np.atleast_2d(p))[0] >= s)
