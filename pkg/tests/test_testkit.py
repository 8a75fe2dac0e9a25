import math

import numpy as np
import pytest

from certiplan.exceptions import DomainError
from certiplan.geometry import make_workspace, rectangle
from certiplan.testkit import (
    OCTILE_DISTORTION,
    GridOracleParams,
    brute_force_bap,
    grid_shortest_path,
    obstacle_union,
    path_clearance,
)


def test_brute_force_bap_examples():
    v, opts = brute_force_bap([[3, 1], [2, 4]])
    assert v == 2 and opts == [(1, 0)]
    v, opts = brute_force_bap(np.full((3, 3), 7.0))
    assert v == 7 and len(opts) == 6
    v, opts = brute_force_bap([[5]])
    assert v == 5 and opts == [(0,)]
    with pytest.raises(DomainError):
        brute_force_bap(np.ones((8, 2)))


def test_grid_oracle_free_space():
    ws = make_workspace([0, 0], [2, 2])
    est = grid_shortest_path(ws, 0.1, [0.5, 0.5], [1.5, 0.5], GridOracleParams(0.05))
    assert 1.0 <= est.length <= 1.09
    assert est.distortion == pytest.approx(OCTILE_DISTORTION)
    assert OCTILE_DISTORTION < 1.09


def test_grid_oracle_narrow_corridor():
    ws = make_workspace([0, 0], [3, 3], [rectangle(1.4, 0.0, 1.6, 1.4), rectangle(1.4, 1.55, 1.6, 3.0)])
    est = grid_shortest_path(ws, 0.1, [0.5, 1.5], [2.5, 1.5], GridOracleParams(0.02))
    assert est.length == math.inf


def test_grid_oracle_square_detour_against_taut_string():
    ws = make_workspace([0, 0], [3, 3], [rectangle(1.2, 1.2, 1.8, 1.8)])
    s = 0.2
    a, b = np.array([0.3, 1.5]), np.array([2.7, 1.5])
    # taut string: tangent to the s-circles around the two near corners, then along the face
    d = np.array([1.2, 1.8]) - a
    dist = np.hypot(*d)
    heading = math.atan2(d[1], d[0]) + math.asin(s / dist)  # turned through on each corner arc
    taut = 2 * math.sqrt(dist**2 - s**2) + 2 * s * heading + 0.6
    raw = grid_shortest_path(ws, s, a, b, GridOracleParams(0.02))
    pulled = grid_shortest_path(ws, s, a, b, GridOracleParams(0.02, shortcut=True))
    assert taut <= pulled.length <= raw.length
    assert pulled.length == pytest.approx(taut, rel=0.03)


def test_oracle_params_validated():
    with pytest.raises(DomainError):
        GridOracleParams(0.1, narrowest_corridor=0.2)
    with pytest.raises(DomainError):
        GridOracleParams(0.1, connectivity=6)
    assert GridOracleParams(0.01, connectivity=4).distortion == pytest.approx(math.sqrt(2))
    ws = make_workspace([0, 0], [3, 3], [rectangle(1, 1, 2, 2)])
    with pytest.raises(DomainError):
        grid_shortest_path(ws, 0.2, [1.5, 1.5], [0.2, 0.2], GridOracleParams(0.05))


def test_path_clearance_and_union():
    ws = make_workspace([0, 0], [4, 4], [rectangle(1, 1, 2, 2)], boundary_is_obstacle=True)
    assert path_clearance(ws, [[0.5, 3.0], [3.0, 3.0]]) == pytest.approx(0.5)
    free = make_workspace([0, 0], [4, 4])
    assert obstacle_union(free).is_empty
