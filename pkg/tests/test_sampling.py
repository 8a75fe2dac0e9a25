import math

import numpy as np
import pytest

from certiplan.exceptions import DomainError
from certiplan.geometry import make_workspace, rectangle
from certiplan.sampling import (
    Scheme,
    certified_dispersion,
    dispersion_bound,
    empirical_dispersion,
    generate,
    triangular_lattice,
)

UNIT = make_workspace([0, 0], [1, 1])
ARENA = make_workspace([0, 0], [3.66, 3.66])


def test_sukharev_16_is_4x4_grid():
    ss = generate(UNIT, "sukharev", 16)
    assert ss.actual_n == 16
    assert np.allclose(np.unique(ss.points[:, 0]), [0.125, 0.375, 0.625, 0.875])
    assert ss.dispersion_bound == pytest.approx(0.5 * math.sqrt(2) / 4, abs=1e-9)
    assert dispersion_bound("sukharev", UNIT, 16) == pytest.approx(0.176777, abs=1e-6)


def test_sukharev_halves_when_n_quadruples():
    assert dispersion_bound("sukharev", UNIT, 64) == pytest.approx(0.088388, abs=1e-6)


def test_triangular_unit_square():
    ss = generate(UNIT, "triangular", 100)
    assert ss.actual_n >= 100
    assert ss.dispersion_bound == pytest.approx(0.062, abs=0.002)


def test_triangular_arena_first_iteration():
    ss = generate(ARENA, Scheme.TRIANGULAR, 1024)
    assert ss.dispersion_bound == pytest.approx(0.071, abs=0.001)


def test_random_bound_rate_and_confidence():
    ns = [1000, 4000, 16000]
    bounds = [dispersion_bound("random", UNIT, n) for n in ns]
    rates = [math.sqrt(math.log(n) / n) for n in ns]
    ratios = [b / r for b, r in zip(bounds, rates)]
    # same rate up to grid rounding
    assert max(ratios) / min(ratios) < 1.3
    ss = generate(UNIT, "random", 4000, seed=3)
    assert 0.9 < ss.confidence <= 1.0
    assert not ss.deterministic
    assert empirical_dispersion(UNIT, ss.points, 0.005) <= ss.dispersion_bound


def test_random_is_seeded():
    a = generate(UNIT, "random", 50, seed=7).points
    b = generate(UNIT, "random", 50, seed=7).points
    c = generate(UNIT, "random", 50, seed=8).points
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("scheme", ["sukharev", "triangular"])
def test_lattices_deterministic_and_decreasing(scheme):
    prev = math.inf
    for n in (64, 256, 1024):
        a, b = generate(ARENA, scheme, n), generate(ARENA, scheme, n)
        assert np.array_equal(a.points, b.points)
        assert a.dispersion_bound < prev
        prev = a.dispersion_bound
    assert np.all(a.points >= ARENA.bbox_min) and np.all(a.points <= ARENA.bbox_max)


def test_zero_samples_rejected():
    with pytest.raises(DomainError):
        generate(UNIT, "sukharev", 0)
    with pytest.raises(DomainError):
        generate(UNIT, "hexagonal", 10)


def test_empirical_dispersion_examples():
    centre = np.array([[0.5, 0.5]])
    est = empirical_dispersion(UNIT, centre, 0.01, certified=False)
    assert est == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert empirical_dispersion(UNIT, centre, 0.01) >= math.sqrt(2) / 2
    grid = generate(UNIT, "sukharev", 16)
    assert empirical_dispersion(UNIT, grid.points, 0.01, certified=False) <= 0.176777 + 1e-6
    with pytest.raises(DomainError):
        empirical_dispersion(UNIT, np.zeros((0, 2)), 0.01)


def test_clamping_never_expands_the_covering_radius():
    a = 0.37
    raw = triangular_lattice(ARENA, a, clamp=False)
    clamped = triangular_lattice(ARENA, a, clamp=True)
    d_raw = certified_dispersion(ARENA, raw, tol=1e-7)
    d_clamped = certified_dispersion(ARENA, clamped, tol=1e-7)
    assert d_clamped <= d_raw + 1e-7
    assert d_raw <= a / math.sqrt(3) + 1e-7


def test_certified_dispersion_brackets_grid_estimate():
    pts = generate(UNIT, "random", 40, seed=1).points
    cert = certified_dispersion(UNIT, pts, tol=1e-9)
    low = empirical_dispersion(UNIT, pts, 0.002, certified=False)
    high = empirical_dispersion(UNIT, pts, 0.002, certified=True)
    assert low - 1e-12 <= cert <= high + 1e-9
    # one centred point: farthest box point is a corner
    assert certified_dispersion(UNIT, [[0.5, 0.5]], tol=1e-9) == pytest.approx(math.sqrt(0.5), abs=2e-9)


def test_obstacles_do_not_change_the_box_bound():
    ws = make_workspace([0, 0], [2, 1], [rectangle(0.5, 0.2, 0.8, 0.8)])
    free = make_workspace([0, 0], [2, 1])
    assert dispersion_bound("triangular", ws, 500) == dispersion_bound("triangular", free, 500)
