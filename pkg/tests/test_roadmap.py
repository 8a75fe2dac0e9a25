import math

import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform

from certiplan.exceptions import DomainError, InfeasibleError
from certiplan.geometry import make_workspace, rectangle, segment_clearance
from certiplan.roadmap import astar, build, near_pairs, shortest_path, shortest_paths
from certiplan.sampling import generate

from conftest import random_scene

UNIT = make_workspace([0, 0], [1, 1])


def test_two_nodes_single_edge():
    ws = make_workspace([0, 0], [2, 2])
    rm = build(ws, [[0.5, 1.0]], [[1.0, 1.0]], 0.0, 1.0, np.zeros((0, 2)))
    assert rm.n_edges == 1
    assert rm.lengths[0] == pytest.approx(0.5)


def test_wall_blocks_edge():
    ws = make_workspace([0, 0], [2, 2], [rectangle(0.9, 0.0, 1.1, 2.0)])
    rm = build(ws, [[0.5, 1.0]], [[1.5, 1.0]], 0.0, 5.0, np.zeros((0, 2)))
    assert rm.n_edges == 0
    assert not shortest_path(rm, 0, 1).reachable


def test_sukharev_grid_has_four_neighbours():
    ss = generate(UNIT, "sukharev", 16)
    rm = build(UNIT, np.zeros((0, 2)), np.zeros((0, 2)), 0.0, 0.3, ss)
    deg = np.diff(rm.indptr)
    pts = rm.nodes
    interior = np.all((pts > 0.2) & (pts < 0.8), axis=1)
    assert np.all(deg[interior] == 4)
    assert np.all(rm.lengths == pytest.approx(0.25))


def test_shortest_path_examples():
    ss = generate(UNIT, "sukharev", 16)
    rm = build(UNIT, [[0.125, 0.125]], [[0.875, 0.875]], 0.0, 0.3, ss)
    s, g = rm.start_indices[0], rm.goal_indices[0]
    p = shortest_path(rm, s, g)
    # start and goal sit on grid samples, so the route is Manhattan on the 0.25 grid
    assert p.length == pytest.approx(1.5)
    same = shortest_path(rm, s, s)
    assert same.length == 0 and len(same.waypoints) == 1
    with pytest.raises(DomainError):
        shortest_path(rm, rm.n_nodes, 0)


def test_manhattan_route_across_the_grid():
    xs = np.linspace(0, 1, 5)
    gx, gy = np.meshgrid(xs, xs)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    rm = build(UNIT, [[0, 0]], [[1, 1]], 0.0, 0.3, pts)
    p = shortest_path(rm, rm.start_indices[0], rm.goal_indices[0])
    assert p.length == pytest.approx(2.0)


@pytest.mark.parametrize("radius", [0.05, 0.13, 0.4])
def test_near_pairs_matches_brute_force(rng, radius):
    pts = rng.uniform(-1, 2, (300, 2))
    i, j, d = near_pairs(pts, radius)
    D = squareform(pdist(pts))
    bi, bj = np.nonzero(np.triu(D < radius, k=1))
    assert np.array_equal(i, bi) and np.array_equal(j, bj)
    assert np.allclose(d, D[bi, bj])


def test_astar_agrees_with_dijkstra(rng):
    for _ in range(4):
        ws = random_scene(rng)
        ss = generate(ws, "triangular", 600)
        rm = build(ws, np.zeros((0, 2)), np.zeros((0, 2)), 0.05, 0.4, ss)
        for _ in range(5):
            a, b = rng.integers(0, rm.n_nodes, 2)
            d = shortest_path(rm, a, b)
            h = astar(rm, a, b)
            assert d.reachable == h.reachable
            if d.reachable:
                assert h.length == pytest.approx(d.length, rel=1e-12)


def test_edges_keep_margin_and_radius(rng):
    ws = random_scene(rng)
    margin = 0.15
    ss = generate(ws, "triangular", 800)
    rm = build(ws, np.zeros((0, 2)), np.zeros((0, 2)), margin, 0.35, ss)
    assert rm.n_edges > 0
    rows = np.repeat(np.arange(rm.n_nodes), np.diff(rm.indptr))
    pick = rng.choice(len(rows), size=min(200, len(rows)), replace=False)
    for k in pick:
        a, b = rm.nodes[rows[k]], rm.nodes[rm.indices[k]]
        assert segment_clearance(ws, a, b) >= margin - 1e-12
        assert np.hypot(*(a - b)) < 0.35


def test_endpoint_violating_margin():
    ws = make_workspace([0, 0], [2, 2], [rectangle(0.9, 0.9, 1.1, 1.1)])
    with pytest.raises(InfeasibleError, match="agent 0"):
        build(ws, [[1.0, 1.2]], [[0.2, 0.2]], 0.3, 0.5, np.zeros((0, 2)))
    with pytest.raises(InfeasibleError, match="goal 0"):
        build(ws, [[0.2, 0.2]], [[1.0, 1.2]], 0.3, 0.5, np.zeros((0, 2)))


def test_straight_line_when_free():
    ws = make_workspace([0, 0], [2, 2])
    rm = build(ws, [[0.2, 0.2]], [[1.7, 1.1]], 0.0, 0.3, generate(ws, "triangular", 2000))
    res = shortest_paths(rm, rm.start_indices, rm.goal_indices)[0][0]
    straight = math.hypot(1.5, 0.9)
    assert straight <= res.length <= 1.1 * straight
    assert np.allclose(res.waypoints[0], [0.2, 0.2]) and np.allclose(res.waypoints[-1], [1.7, 1.1])


def test_edge_budget_refuses_dense_roadmaps(monkeypatch):
    import certiplan.roadmap as roadmap

    monkeypatch.setattr(roadmap, "MAX_EDGE_CANDIDATES", 10_000)
    ss = generate(UNIT, "triangular", 2000)
    with pytest.raises(DomainError, match="candidate edges"):
        build(UNIT, np.zeros((0, 2)), np.zeros((0, 2)), 0.0, 0.2, ss)
    assert build(UNIT, np.zeros((0, 2)), np.zeros((0, 2)), 0.0, 0.035, ss).n_edges > 0
