"""Sample generators over the workspace box with certified dispersion bounds.

Dispersion bounds are computed over the whole box, so they bound the
dispersion of the samples around any point of any subset of the box.

For a box of side lengths ``L`` in ``d`` dimensions with ``n`` samples:

* cell-centre grids (Sukharev) cover with half a cell diagonal,
  ``0.5 * sqrt(d) * n**(-1/d)`` on the unit cube;
* the planar triangular lattice with spacing ``a`` covers with ``a / sqrt(3)``,
  which for area ``A`` is ``sqrt(2 / (3 sqrt(3))) * sqrt(A / n) ~ 0.62 sqrt(A / n)``;
* i.i.d. uniform points cover at rate ``(log n / n)**(1/d)`` with high
  probability; the bound reported here holds with the attached ``confidence``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree

from .exceptions import DomainError
from .geometry import Workspace

__all__ = [
    "Scheme",
    "SampleSet",
    "generate",
    "dispersion_bound",
    "empirical_dispersion",
    "certified_dispersion",
    "triangular_lattice",
]

TRIANGULAR_CONSTANT = math.sqrt(2.0 / (3.0 * math.sqrt(3.0)))


class Scheme(str, Enum):
    SUKHAREV = "sukharev"
    TRIANGULAR = "triangular"
    RANDOM_UNIFORM = "random_uniform"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, Scheme):
            return value
        aliases = {"random": "random_uniform", "grid": "sukharev", "triangle": "triangular"}
        value = aliases.get(str(value).lower(), str(value).lower())
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"unknown sampling scheme {value!r}") from None


@dataclass(frozen=True, eq=False)
class SampleSet:
    points: np.ndarray
    requested_n: int
    actual_n: int
    dispersion_bound: float
    scheme: Scheme
    seed: int | None = None
    deterministic: bool = True
    # probability that ``dispersion_bound`` holds; 1.0 for lattices
    confidence: float = 1.0


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    return int(n)


def _grid_shape(lx: float, ly: float, n: int) -> tuple[int, int]:
    h = math.sqrt(lx * ly / n)
    kx = max(1, math.ceil(lx / h - 1e-9))
    ky = max(1, math.ceil(ly / h - 1e-9))
    while kx * ky < n:
        if lx / kx >= ly / ky:
            kx += 1
        else:
            ky += 1
    return kx, ky


def _sukharev_bound(lx, ly, kx, ky) -> float:
    return 0.5 * math.hypot(lx / kx, ly / ky)


def _triangular_spacing(area: float, n: int) -> float:
    return math.sqrt(2.0 * area / (math.sqrt(3.0) * n))


def triangular_lattice(ws: Workspace, spacing: float, clamp: bool = True) -> np.ndarray:
    """Triangular lattice anchored at the box corner.

    Every lattice point within one covering radius of the box (per axis) is
    kept, so each box point's nearest lattice point is present; with ``clamp``
    those outside are projected onto the box and duplicates removed, which
    cannot increase any box point's distance to its nearest sample.
    """
    lo = ws.bbox_min
    lx, ly = ws.extent
    a = spacing
    cover = a / math.sqrt(3.0)
    row_h = a * math.sqrt(3.0) / 2.0
    j_lo = math.floor(-cover / row_h)
    j_hi = math.ceil((ly + cover) / row_h)
    rows = []
    for j in range(j_lo, j_hi + 1):
        y = j * row_h
        if y < -cover or y > ly + cover:
            continue
        shift = 0.5 * a if j % 2 else 0.0
        i_lo = math.floor((-cover - shift) / a)
        i_hi = math.ceil((lx + cover - shift) / a)
        xs = shift + a * np.arange(i_lo, i_hi + 1)
        xs = xs[(xs >= -cover) & (xs <= lx + cover)]
        rows.append(np.column_stack([xs, np.full(len(xs), y)]))
    pts = np.concatenate(rows) + lo
    if not clamp:
        return pts
    pts = np.clip(pts, ws.bbox_min, ws.bbox_max)
    # order-preserving de-duplication keeps generation order deterministic
    _, first = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(first)]


def _random_cells(n: int) -> int:
    if n < 3:
        return 1
    return max(1, int(n / (2.0 * math.log(n))))


def _random_bound(ws: Workspace, n: int) -> tuple[float, float]:
    """Cell-occupancy bound: if each of ``m`` cells holds a sample, the dispersion
    is at most a cell diagonal; a union bound gives the failure probability."""
    lx, ly = ws.extent
    kx, ky = _grid_shape(lx, ly, _random_cells(n))
    m = kx * ky
    fail = 0.0 if m == 1 else min(1.0, m * (1.0 - 1.0 / m) ** n)
    return math.hypot(lx / kx, ly / ky), 1.0 - fail


def dispersion_bound(scheme, ws: Workspace, n: int) -> float:
    """Dispersion bound the generator reports for ``n`` requested samples."""
    scheme = Scheme.parse(scheme)
    n = _check_n(n)
    lx, ly = (float(v) for v in ws.extent)
    if scheme is Scheme.SUKHAREV:
        return _sukharev_bound(lx, ly, *_grid_shape(lx, ly, n))
    if scheme is Scheme.TRIANGULAR:
        return _triangular_spacing(lx * ly, n) / math.sqrt(3.0)
    return _random_bound(ws, n)[0]


def generate(ws: Workspace, scheme, n: int, seed: int | None = None) -> SampleSet:
    """Generate at least ``n`` samples (exactly ``n`` for random sampling)."""
    scheme = Scheme.parse(scheme)
    n = _check_n(n)
    lx, ly = (float(v) for v in ws.extent)
    if scheme is Scheme.SUKHAREV:
        kx, ky = _grid_shape(lx, ly, n)
        xs = ws.bbox_min[0] + (np.arange(kx) + 0.5) * (lx / kx)
        ys = ws.bbox_min[1] + (np.arange(ky) + 0.5) * (ly / ky)
        gx, gy = np.meshgrid(xs, ys)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        return SampleSet(pts, n, len(pts), _sukharev_bound(lx, ly, kx, ky), scheme)
    if scheme is Scheme.TRIANGULAR:
        a = _triangular_spacing(lx * ly, n)
        pts = triangular_lattice(ws, a)
        if len(pts) < n:  # pragma: no cover - clamped ring always adds points
            raise AssertionError("triangular lattice produced fewer points than requested")
        return SampleSet(pts, n, len(pts), a / math.sqrt(3.0), scheme)
    rng = np.random.default_rng(seed)
    pts = ws.bbox_min + rng.random((n, 2)) * ws.extent
    bound, conf = _random_bound(ws, n)
    return SampleSet(pts, n, n, bound, scheme, seed=seed, deterministic=False, confidence=conf)


def _eval_grid(ws: Workspace, resolution: float):
    lx, ly = ws.extent
    kx = max(1, math.ceil(lx / resolution))
    ky = max(1, math.ceil(ly / resolution))
    xs = np.linspace(ws.bbox_min[0], ws.bbox_max[0], kx + 1)
    ys = np.linspace(ws.bbox_min[1], ws.bbox_max[1], ky + 1)
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()]), 0.5 * math.hypot(lx / kx, ly / ky)


def empirical_dispersion(ws: Workspace, points, resolution: float, certified: bool = True) -> float:
    """Grid estimate of the dispersion of ``points`` in the workspace box.

    Returns the largest nearest-sample distance over a grid of spacing at most
    ``resolution``; with ``certified`` the grid half-diagonal is added, giving
    an upper bound on the true dispersion. Without it the value is a lower bound.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise DomainError("dispersion of an empty point set is undefined")
    if resolution <= 0:
        raise DomainError("resolution must be positive")
    grid, slack = _eval_grid(ws, resolution)
    d, _ = cKDTree(pts).query(grid)
    return float(d.max() + (slack if certified else 0.0))


def certified_dispersion(ws: Workspace, points, tol: float = 1e-9, max_cells: int = 4_000_000) -> float:
    """Upper bound on the dispersion within ``tol`` of the true value.

    Branch and bound over square cells: a cell with centre ``c`` and
    half-diagonal ``rho`` cannot contain a point farther than
    ``nn(c) + rho`` from the samples. Cells are split until their bound
    falls under the best lower bound found plus ``tol``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise DomainError("dispersion of an empty point set is undefined")
    tree = cKDTree(pts)
    lx, ly = (float(v) for v in ws.extent)
    side = max(lx, ly) / 64.0
    kx = math.ceil(lx / side)
    ky = math.ceil(ly / side)
    hx, hy = lx / kx, ly / ky
    cx = ws.bbox_min[0] + (np.arange(kx) + 0.5) * hx
    cy = ws.bbox_min[1] + (np.arange(ky) + 0.5) * hy
    gx, gy = np.meshgrid(cx, cy)
    centers = np.column_stack([gx.ravel(), gy.ravel()])
    corners, _ = _eval_grid(ws, min(hx, hy))
    best = float(tree.query(corners)[0].max())
    total = 0
    while len(centers):
        rho = 0.5 * math.hypot(hx, hy)
        d = tree.query(centers)[0]
        best = max(best, float(d.max()))
        keep = d + rho > best + tol
        centers = centers[keep]
        if not len(centers):
            break
        if rho <= tol:
            return best + rho
        total += len(centers)
        if total > max_cells:
            raise DomainError("certified_dispersion exceeded its cell budget")
        hx, hy = 0.5 * hx, 0.5 * hy
        offs = np.array([[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5], [0.5, 0.5]]) * [hx, hy]
        centers = (centers[:, None, :] + offs[None, :, :]).reshape(-1, 2)
    return best + tol
