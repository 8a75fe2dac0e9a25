import numpy as np
import pytest
from hypothesis import settings

from certiplan.geometry import make_workspace, rectangle

settings.register_profile("certiplan", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("certiplan")


@pytest.fixture
def unit_obstacle_ws():
    """Unit-square obstacle inside a 6 x 6 box centred on it."""
    return make_workspace([-3, -3], [3, 3], [rectangle(0, 0, 1, 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_scene(rng, n_obstacles=3, size=4.0):
    """Box ``[0, size]^2`` with random convex quadrilaterals kept away from the walls."""
    obs = []
    while len(obs) < n_obstacles:
        c = rng.uniform(0.8, size - 0.8, 2)
        ang = np.sort(rng.uniform(0, 2 * np.pi, 4))
        if np.min(np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))) < 0.4:
            continue
        rad = rng.uniform(0.2, 0.5, 4)
        obs.append(np.stack([c[0] + rad * np.cos(ang), c[1] + rad * np.sin(ang)], axis=1))
    return make_workspace([0, 0], [size, size], obs)


# acceptance criterion number -> (passed, title, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {title}" + (f" ({detail})" if detail else ""))
